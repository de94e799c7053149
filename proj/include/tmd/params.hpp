#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tmd/error.hpp"

namespace tmd {

// One parameter set for an ordered species triplet (i, j, k).  Members follow
// the conventional file column order.  Two-body pieces read the (i, j, j)
// entry; three-body pieces read (i, j, k).
struct TersoffEntry {
  int m = 1;            // distance-difference exponent, 1 or 3
  double gamma = 1.0;
  double lambda3 = 0.0; // 1/A
  double c = 0.0;
  double d = 1.0;
  double h = 0.0;
  double eta = 1.0;     // bond-order exponent, often written n
  double beta = 0.0;
  double lambda2 = 0.0; // 1/A
  double big_b = 0.0;   // eV
  double big_r = 0.0;   // A, center of the cutoff ramp
  double big_d = 0.0;   // A, half-width of the cutoff ramp
  double lambda1 = 0.0; // 1/A
  double big_a = 0.0;   // eV

  double cutoff() const { return big_r + big_d; }

  // Enforces the domain constraints; `where` names the triplet in messages.
  void validate(const std::string& where) const;
};

// Dense table of S^3 entries for S species, plus names and the largest
// cutoff.  Immutable once constructed.
class ParamTable {
 public:
  // `entries` is indexed (i*S + j)*S + k over species ids in name order.
  ParamTable(std::vector<std::string> species, std::vector<TersoffEntry> entries);

  int species_count() const { return int(species_.size()); }
  const std::vector<std::string>& species_names() const { return species_; }
  int species_id(std::string_view name) const;  // -1 when unknown

  const TersoffEntry& entry(int si, int sj, int sk) const {
    return entries_[std::size_t((si * species_count() + sj) * species_count() + sk)];
  }
  const std::vector<TersoffEntry>& entries() const { return entries_; }

  double r_cut_max() const { return r_cut_max_; }

 private:
  std::vector<std::string> species_;
  std::vector<TersoffEntry> entries_;
  double r_cut_max_ = 0.0;
};

// Parses the whitespace/'#'-comment format: each entry is three element names
// followed by 14 numbers (m gamma lambda3 c d h eta beta lambda2 B R D
// lambda1 A); entries may wrap across lines.  Species ids are assigned in
// first-appearance order.  Rejects duplicate or missing triplets and any
// entry violating the field constraints.
ParamTable parse_param_text(std::string_view text, std::string_view source_name);
ParamTable load_param_file(std::istream& in, std::string_view source_name);
ParamTable load_param_file(const std::string& path);

// Renders a table back into the file format with round-trip-exact numbers.
std::string serialize_param_table(const ParamTable& table);

// The standard silicon parameterization shipped in data/Si.tersoff.
ParamTable builtin_silicon();

// Column layout of a flattened parameter row (kernel view).
struct ParamField {
  enum : int {
    kA = 0, kB, kLam1, kLam2, kLam3, kBeta, kEta, kC, kD, kH, kGamma, kM,
    kBigR, kBigD, kCut, kCutSq, kCount
  };
};

// Kernel-friendly copy of a ParamTable: one row of ParamField::kCount reals
// per ordered triplet, contiguous so lanes can gather whole rows.  Real is
// double or float depending on the compute precision.
template <typename Real>
struct FlatParams {
  int species = 0;
  std::vector<Real> rows;
  Real r_cut_max{};

  int row_index(int si, int sj, int sk) const {
    return (si * species + sj) * species + sk;
  }
  const Real* row(int si, int sj, int sk) const {
    return rows.data() + std::size_t(row_index(si, sj, sk)) * ParamField::kCount;
  }

  static FlatParams from(const ParamTable& table) {
    FlatParams fp;
    fp.species = table.species_count();
    fp.rows.reserve(table.entries().size() * ParamField::kCount);
    for (const TersoffEntry& e : table.entries()) {
      const double cut = e.cutoff();
      const double row[ParamField::kCount] = {
          e.big_a, e.big_b, e.lambda1, e.lambda2, e.lambda3, e.beta, e.eta,
          e.c, e.d, e.h, e.gamma, double(e.m), e.big_r, e.big_d, cut, cut * cut};
      for (double v : row) fp.rows.push_back(Real(v));
    }
    fp.r_cut_max = Real(table.r_cut_max());
    return fp;
  }
};

}  // namespace tmd
