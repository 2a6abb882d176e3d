#pragma once

#include <string>
#include <vector>

#include "ocf/counting.hpp"

namespace ocf {

inline constexpr const char* kToolVersion = "1.0.0";

struct OrbitRecord {
  std::string s_partition;  // "{1,3}{5}" when the refined label applies, else ""
  unsigned long long size = 0;
};

struct LabelRecord {
  std::vector<int> phi;       // graded dimensions f_0..f_amax
  int component = -1;         // 0/1 for f_0 = 0 labels, else -1
  std::string predicted_poly;
  unsigned long long predicted_at_q = 0;
  unsigned long long observed = 0;
  std::vector<OrbitRecord> orbits;  // conjugacy orbits inside the piece
};

struct PieceReport {
  int D = 0;
  long q = 0;
  int type = 0;
  unsigned long long so_order = 0;
  unsigned long long unipotent_count = 0;
  std::vector<LabelRecord> labels;  // one per admissible label, sorted
};

struct RunReport {
  std::string space;  // descriptor, e.g. "D4+"
  int p = 0, k = 0;
  std::string modulus;
  std::vector<PieceReport> results;
};

/// Enumerates SO_Q, classifies every unipotent element, and fills the
/// predicted-vs-observed table; with_orbits adds the conjugacy-orbit
/// refinement with the S-partition of each orbit.
PieceReport build_piece_report(const QuadSpace& s, bool with_orbits,
                               unsigned long long guard = 10000000ULL);

/// observed == predicted for every label and the observed counts sum to the
/// unipotent count.
bool report_consistent(const PieceReport& r);

RunReport make_run_report(const QuadSpace& s, std::vector<PieceReport> results);

/// Deterministic JSON (fixed key order, sorted records, 2-space indent).
std::string to_json(const RunReport& r);

}  // namespace ocf
