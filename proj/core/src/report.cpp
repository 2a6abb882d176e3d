#include "ocf/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ocf {

namespace {

std::string format_s_partition(const std::vector<std::vector<int>>& blocks) {
  std::ostringstream out;
  for (const auto& blk : blocks) {
    out << "{";
    for (size_t i = 0; i < blk.size(); ++i) out << (i ? "," : "") << blk[i];
    out << "}";
  }
  return out.str();
}

unsigned long long to_ull(const mpz_class& v) {
  if (v < 0 || !v.fits_ulong_p())
    throw std::runtime_error("report: count does not fit in an unsigned integer");
  return v.get_ui();
}

}  // namespace

PieceReport build_piece_report(const QuadSpace& s, bool with_orbits, unsigned long long guard) {
  PieceReport rep;
  rep.D = s.D;
  rep.q = s.F->q();
  rep.type = s.type;

  SOEnum en = enumerate_so(s, guard);
  rep.so_order = en.order;
  rep.unipotent_count = en.unipotents.size();

  // Classify every unipotent element by its canonical filtration.
  std::map<PieceLabel, std::vector<Mat>> members;
  std::map<Mat, QFiltration> filt_of;
  for (const Mat& u : en.unipotents) {
    Mat n = mat_sub(u, Mat::identity(s.F, s.D));
    NilpotentWitness w = make_witness(s, n);
    QFiltration x = canonical_filtration(w);
    members[piece_label(x)].push_back(u);
    if (with_orbits) filt_of.emplace(u, x);
  }

  for (const PieceLabel& phi : admissible_labels(s.D, s.type)) {
    LabelRecord rec;
    rec.phi = phi.f;
    rec.component = phi.component;
    QPoly poly = card_piece(phi, s.D, s.type);
    rec.predicted_poly = poly.str();
    rec.predicted_at_q = to_ull(poly.eval_int(rep.q));
    auto it = members.find(phi);
    const std::vector<Mat> none;
    const std::vector<Mat>& elems = it == members.end() ? none : it->second;
    rec.observed = elems.size();

    if (with_orbits) {
      std::set<Mat> remaining(elems.begin(), elems.end());
      while (!remaining.empty()) {
        Mat u = *remaining.begin();
        std::set<Mat> orbit = conjugacy_orbit(en.so_generators, u, guard);
        OrbitRecord orec;
        orec.size = orbit.size();
        if (s.F->p() == 2 && !phi.f.empty() && phi.f[0] > 0) {
          const QFiltration& x = filt_of.at(u);
          Mat n = mat_sub(u, Mat::identity(s.F, s.D));
          orec.s_partition = format_s_partition(class_label(x, make_witness(s, n)).s);
        }
        rec.orbits.push_back(std::move(orec));
        for (const Mat& g : orbit) remaining.erase(g);
      }
      std::sort(rec.orbits.begin(), rec.orbits.end(), [](const auto& a, const auto& b) {
        return std::tie(a.s_partition, a.size) < std::tie(b.s_partition, b.size);
      });
    }
    rep.labels.push_back(std::move(rec));
  }
  return rep;
}

bool report_consistent(const PieceReport& r) {
  unsigned long long total = 0;
  for (const LabelRecord& rec : r.labels) {
    if (rec.observed != rec.predicted_at_q) return false;
    total += rec.observed;
  }
  return total == r.unipotent_count;
}

RunReport make_run_report(const QuadSpace& s, std::vector<PieceReport> results) {
  RunReport run;
  run.space = space_desc(s);
  run.p = s.F->p();
  run.k = s.F->k();
  run.modulus = s.F->modulus_string();
  run.results = std::move(results);
  return run;
}

std::string to_json(const RunReport& r) {
  nlohmann::ordered_json root;
  root["tool_version"] = kToolVersion;
  root["field"] = {{"p", r.p}, {"k", r.k}, {"modulus", r.modulus}};
  root["space"] = r.space;
  root["results"] = nlohmann::ordered_json::array();
  for (const PieceReport& rep : r.results) {
    nlohmann::ordered_json jr;
    jr["D"] = rep.D;
    jr["q"] = rep.q;
    jr["type"] = rep.type;
    jr["so_order"] = rep.so_order;
    jr["unipotent_count"] = rep.unipotent_count;
    jr["labels"] = nlohmann::ordered_json::array();
    for (const LabelRecord& rec : rep.labels) {
      nlohmann::ordered_json jl;
      jl["phi"] = rec.phi;
      jl["component"] = rec.component;
      jl["predicted_poly"] = rec.predicted_poly;
      jl["predicted_at_q"] = rec.predicted_at_q;
      jl["observed"] = rec.observed;
      jl["orbits"] = nlohmann::ordered_json::array();
      for (const OrbitRecord& o : rec.orbits)
        jl["orbits"].push_back({{"s_partition", o.s_partition}, {"size", o.size}});
      jr["labels"].push_back(std::move(jl));
    }
    root["results"].push_back(std::move(jr));
  }
  return root.dump(2) + "\n";
}

}  // namespace ocf
