// Command-line driver: classification of unipotent isometries by canonical
// filtration, piece enumeration with predicted-vs-observed tables,
// verification suites, and admissible-label listings.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocf/report.hpp"

using namespace ocf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

std::pair<int, int> factor_prime_power(long q) {
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) {
    if (q % p) continue;
    int k = 0;
    long v = q;
    while (v % p == 0) {
      v /= p;
      ++k;
    }
    if (v == 1) return {p, k};
    break;
  }
  throw std::invalid_argument("q must be a prime power <= 64");
}

QuadSpace make_space(const std::string& desc, long q) {
  auto [D, kind] = parse_space_desc(desc);
  auto [p, k] = factor_prime_power(q);
  return standard_space(make_field(p, k), D, kind);
}

unsigned long long so_order_formula(const QuadSpace& s) {
  unsigned long long o = classical_O_order(s);
  return (s.F->p() == 2 && s.D % 2 == 1) ? o : o / 2;
}

std::string vec_str(const Vec& v) {
  std::ostringstream out;
  for (size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << int(v[i]);
  return out.str();
}

std::string phi_str(const std::vector<int>& f, int component) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
  out << "]";
  if (component >= 0) out << " j=" << component;
  return out.str();
}

// ---------------------------------------------------------------------------

int cmd_classify(const std::string& desc, long q, const std::string& path) {
  QuadSpace s = make_space(desc, q);
  std::ifstream in(path);
  if (!in) {
    std::cerr << "classify: cannot open " << path << "\n";
    return kExitUsage;
  }
  Mat g = read_mat(in, s.F);
  if (g.rows != s.D || g.cols != s.D) {
    std::cerr << "classify: expected a " << s.D << "x" << s.D << " matrix\n";
    return kExitUsage;
  }
  if (!is_isometry(s, g)) {
    std::cerr << "classify: not an isometry of " << desc << "\n";
    return kExitMismatch;
  }
  Mat n = mat_sub(g, Mat::identity(s.F, s.D));
  if (!is_nilpotent(n)) {
    std::cerr << "classify: not unipotent\n";
    return kExitMismatch;
  }
  if (!so_membership(s, g)) {
    std::cerr << "classify: not in SO (Dickson invariant " << dickson(s, g) << ")\n";
    return kExitMismatch;
  }

  NilpotentWitness w = make_witness(s, n);
  QFiltration x = canonical_filtration(w);
  PieceLabel phi = piece_label(x);

  std::cout << "space " << desc << " over GF(" << q << ")\n";
  std::cout << "jordan blocks:";
  for (int i = 1; i <= w.e; ++i)
    if (w.c[size_t(i)] > 0) std::cout << " " << i << "^" << w.c[size_t(i)];
  if (w.e == 0) std::cout << " (identity)";
  std::cout << "\n";
  if (s.F->p() == 2 && w.e > 0) {
    std::cout << "epsilon:";
    for (int i = 1; i <= w.e; ++i) std::cout << " " << w.eps[size_t(i)];
    std::cout << "\n";
  }
  std::cout << "label phi = " << phi_str(phi.f, phi.component) << "\n";
  if (s.F->p() == 2 && !phi.f.empty() && phi.f[0] > 0)
    std::cout << "refined label: " << class_label(x, w).str() << "\n";
  for (int a = x.lo; a < x.lo + int(x.chain.size()); ++a) {
    const Subspace& xa = x.at(a);
    std::cout << "X^{>=" << a << "} dim " << xa.dim() << "\n";
    for (int r = 0; r < xa.dim(); ++r) std::cout << "  " << vec_str(xa.basis.row(r)) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

void print_pieces_text(std::ostream& out, const PieceReport& rep) {
  out << "D=" << rep.D << " q=" << rep.q << " type=" << rep.type << " |SO|=" << rep.so_order
      << " unipotents=" << rep.unipotent_count << "\n";
  for (const LabelRecord& rec : rep.labels) {
    out << "  phi=" << phi_str(rec.phi, rec.component) << " predicted=" << rec.predicted_poly
        << " at q: " << rec.predicted_at_q << " observed: " << rec.observed;
    if (!rec.orbits.empty()) {
      out << " orbits:";
      for (const OrbitRecord& o : rec.orbits) {
        out << " " << o.size;
        if (!o.s_partition.empty()) out << o.s_partition;
      }
    }
    out << "\n";
  }
}

void print_pieces_csv(std::ostream& out, const PieceReport& rep) {
  out << "D,q,type,phi,component,predicted_poly,predicted_at_q,observed\n";
  for (const LabelRecord& rec : rep.labels) {
    std::ostringstream f;
    for (size_t i = 0; i < rec.phi.size(); ++i) f << (i ? " " : "") << rec.phi[i];
    out << rep.D << "," << rep.q << "," << rep.type << "," << f.str() << "," << rec.component
        << ",\"" << rec.predicted_poly << "\"," << rec.predicted_at_q << "," << rec.observed
        << "\n";
  }
}

int cmd_pieces(const std::string& desc, long q, const std::string& out_path,
               const std::string& format, bool orbits, unsigned long long guard) {
  QuadSpace s = make_space(desc, q);
  if (so_order_formula(s) > guard) {
    std::cerr << "pieces: |SO| = " << so_order_formula(s) << " exceeds the guard " << guard
              << "; use a smaller space or q, or raise --guard\n";
    return kExitUsage;
  }
  std::cerr << "pieces: enumerating SO(" << desc << ", q=" << q << ")...\n";
  PieceReport rep = build_piece_report(s, orbits, guard);

  std::ostringstream body;
  if (format == "json")
    body << to_json(make_run_report(s, {rep}));
  else if (format == "csv")
    print_pieces_csv(body, rep);
  else
    print_pieces_text(body, rep);

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "pieces: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    out << body.str();
  }
  if (!report_consistent(rep)) {
    std::cerr << "pieces: predicted and observed counts disagree\n";
    return kExitMismatch;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string space;
  long q = 0;
  bool pass = false;
  std::string detail;
};

std::vector<std::pair<std::string, long>> space_tasks(int dmax, const std::vector<long>& qlist,
                                                      unsigned long long guard) {
  std::vector<std::pair<std::string, long>> tasks;
  for (int D = 2; D <= dmax; ++D) {
    std::vector<std::string> descs;
    if (D % 2 == 0) {
      descs.push_back("D" + std::to_string(D) + "+");
      descs.push_back("D" + std::to_string(D) + "-");
    } else {
      descs.push_back("D" + std::to_string(D));
    }
    for (const std::string& d : descs)
      for (long q : qlist) {
        QuadSpace s = make_space(d, q);
        if (so_order_formula(s) <= guard) tasks.emplace_back(d, q);
      }
  }
  return tasks;
}

template <typename Fn>
std::vector<Check> run_tasks(const std::vector<std::pair<std::string, long>>& tasks, int jobs,
                             Fn&& fn) {
  std::vector<Check> checks(tasks.size());
  size_t next = 0;
  while (next < tasks.size()) {
    size_t batch = std::min(size_t(std::max(jobs, 1)), tasks.size() - next);
    std::vector<std::future<Check>> futs;
    for (size_t i = 0; i < batch; ++i) {
      auto [d, q] = tasks[next + i];
      futs.push_back(std::async(std::launch::async, [&fn, d, q] { return fn(d, q); }));
    }
    for (size_t i = 0; i < batch; ++i) checks[next + i] = futs[i].get();
    next += batch;
  }
  return checks;
}

Check check_theorem17(const std::string& d, long q, unsigned long long guard) {
  Check c{"theorem17", d, q};
  std::cerr << "verify: theorem17 " << d << " q=" << q << "\n";
  QuadSpace s = make_space(d, q);
  bool uniq = s.D <= 4 && q <= 3;
  TheoremReport rep = verify_theorem_1_7(s, uniq, guard);
  unsigned long long total = 0;
  for (const PieceTally& t : rep.pieces) total += t.count;
  c.pass = rep.all_adapted && rep.uniqueness_ok && total == rep.unipotent_count;
  if (!c.pass)
    c.detail = rep.all_adapted ? (rep.uniqueness_ok ? "piece counts do not partition"
                                                    : "adapted filtration not unique")
                               : "element without adapted filtration";
  return c;
}

Check check_counts(const std::string& d, long q, unsigned long long guard) {
  Check c{"counts", d, q};
  std::cerr << "verify: counts " << d << " q=" << q << "\n";
  QuadSpace s = make_space(d, q);
  PieceReport rep = build_piece_report(s, false, guard);
  c.pass = report_consistent(rep);
  if (!c.pass)
    for (const LabelRecord& rec : rep.labels)
      if (rec.observed != rec.predicted_at_q)
        c.detail += "phi=" + phi_str(rec.phi, rec.component) + " predicted " +
                    std::to_string(rec.predicted_at_q) + " observed " +
                    std::to_string(rec.observed) + "; ";
  return c;
}

Check check_invariants(const std::string& d, long q, unsigned long long guard) {
  Check c{"invariants", d, q};
  std::cerr << "verify: invariants " << d << " q=" << q << "\n";
  QuadSpace s = make_space(d, q);
  ClassReport rep = class_partition(s, guard);
  c.pass = rep.label_constant_on_orbits;
  if (!c.pass) c.detail = "label not constant on a conjugacy orbit";
  return c;
}

Check check_polynomiality(int dmax) {
  Check c{"polynomiality", "D<=" + std::to_string(dmax), 0};
  c.pass = true;
  try {
    for (int D = 2; D <= dmax; ++D) {
      std::vector<int> types = (D % 2 == 0) ? std::vector<int>{1, -1} : std::vector<int>{0};
      for (int type : types)
        for (const PieceLabel& phi : admissible_labels(D, type)) card_piece(phi, D, type);
    }
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = e.what();
  }
  return c;
}

int cmd_verify(const std::string& suite, int dmax, const std::vector<long>& qlist, int jobs,
               unsigned long long guard) {
  std::vector<Check> checks;
  auto tasks = space_tasks(dmax, qlist, guard);
  if (suite == "theorem17" || suite == "all") {
    auto r = run_tasks(tasks, jobs, [&](const std::string& d, long q) {
      return check_theorem17(d, q, guard);
    });
    checks.insert(checks.end(), r.begin(), r.end());
  }
  if (suite == "counts" || suite == "all") {
    checks.push_back(check_polynomiality(std::max(dmax, 8)));
    auto r = run_tasks(tasks, jobs, [&](const std::string& d, long q) {
      return check_counts(d, q, guard);
    });
    checks.insert(checks.end(), r.begin(), r.end());
  }
  if (suite == "invariants" || suite == "all") {
    auto r = run_tasks(tasks, jobs, [&](const std::string& d, long q) {
      return check_invariants(d, q, guard);
    });
    checks.insert(checks.end(), r.begin(), r.end());
  }

  bool all_pass = true;
  nlohmann::ordered_json root;
  root["tool_version"] = kToolVersion;
  root["suite"] = suite;
  root["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    all_pass = all_pass && c.pass;
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["space"] = c.space;
    jc["q"] = c.q;
    jc["pass"] = c.pass;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    root["checks"].push_back(std::move(jc));
  }
  root["pass"] = all_pass;
  std::cout << root.dump(2) << "\n";
  return all_pass ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------

int cmd_labels(const std::string& desc, long q) {
  auto [D, kind] = parse_space_desc(desc);
  int type = 0;
  if (D % 2 == 0) type = (kind == SpaceKind::Split) ? 1 : -1;
  for (const PieceLabel& phi : admissible_labels(D, type)) {
    QPoly poly = card_piece(phi, D, type);
    std::cout << "phi=" << phi_str(phi.f, phi.component) << " d=" << dim_d(phi.f)
              << " card=" << poly.str();
    if (q > 0) std::cout << " at q=" << q << ": " << poly.eval_int(q).get_str();
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical filtrations of unipotent elements in special orthogonal groups"};
  app.require_subcommand(1);

  std::string space_desc_arg, matrix_path, out_path, format = "json", suite = "all";
  long q_arg = 2;
  int dmax = 4, jobs = 1;
  bool no_orbits = false;
  unsigned long long guard = 10000000ULL;
  std::vector<long> qlist = {2, 3};

  auto* classify = app.add_subcommand("classify", "Classify one unipotent isometry");
  classify->add_option("--space", space_desc_arg, "Space descriptor, e.g. D4+")->required();
  classify->add_option("--q", q_arg, "Field size")->required();
  classify->add_option("--matrix", matrix_path, "Matrix file: 'rows cols q' then entries")
      ->required();

  auto* pieces = app.add_subcommand("pieces", "Predicted vs observed piece table");
  pieces->add_option("--space", space_desc_arg, "Space descriptor")->required();
  pieces->add_option("--q", q_arg, "Field size")->required();
  pieces->add_option("--out", out_path, "Output path (default stdout)");
  pieces->add_option("--format", format, "json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  pieces->add_flag("--no-orbits", no_orbits, "Skip the conjugacy-orbit refinement");
  pieces->add_option("--guard", guard, "Largest |SO| to enumerate");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", suite, "theorem17|counts|invariants|all")
      ->check(CLI::IsMember({"theorem17", "counts", "invariants", "all"}));
  verify->add_option("--dmax", dmax, "Largest dimension");
  verify->add_option("--qlist", qlist, "Field sizes")->delimiter(',');
  verify->add_option("--jobs", jobs, "Worker threads");
  verify->add_option("--guard", guard, "Largest |SO| to enumerate");

  auto* labels = app.add_subcommand("labels", "List admissible labels");
  labels->add_option("--space", space_desc_arg, "Space descriptor")->required();
  labels->add_option("--q", q_arg, "Evaluate the predicted polynomials at q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(space_desc_arg, q_arg, matrix_path);
    if (pieces->parsed())
      return cmd_pieces(space_desc_arg, q_arg, out_path, format, !no_orbits, guard);
    if (verify->parsed()) return cmd_verify(suite, dmax, qlist, jobs, guard);
    if (labels->parsed()) return cmd_labels(space_desc_arg, labels->count("--q") ? q_arg : 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
