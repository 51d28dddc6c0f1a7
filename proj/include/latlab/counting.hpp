#pragma once

// Exact counting of Z^d intersected with t*D. Membership of an integer
// point is decided in exact integer arithmetic after clearing the
// rational scale t = a/b into scaled thresholds; floating point is used
// only to bracket ranges, always followed by an exact guard.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "latlab/domain.hpp"

namespace latlab {

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  // Accepts "7", "2.5", "7/2".
  static Rational parse(const std::string& text);
  double to_double() const { return static_cast<double>(num) / den; }
  std::string str() const;
};

struct CountResult {
  Rational t;
  mpz_class count;
  double volume_term = 0.0;  // vol(D) * t^d
  double remainder = 0.0;    // count - volume_term
};

// Exact |{k in Z^d : k in tD}| by recursive coordinate slicing with an
// analytic innermost range and sign-symmetry folding.
mpz_class count_lattice_points(const DomainSpec& spec, const Rational& t,
                               int threads = 1);

// Full bounding-box scan; oracle for tests. Throws above the cap.
mpz_class brute_force_count(const DomainSpec& spec, const Rational& t,
                            double cap = 20.0);

// Maximal M >= 0 such that coordinate `coord` = M can still satisfy
// membership when the listed coordinates are fixed and all others are 0.
// nullopt when even coord = 0 is infeasible. The admissible interval is
// [-M, M] by symmetry.
std::optional<long long> coordinate_range(
    const DomainSpec& spec, const Rational& t, int coord,
    const std::vector<std::pair<int, long long>>& fixed);

// Exact membership test for an integer point (exposed for oracles).
bool lattice_point_in_scaled_domain(const DomainSpec& spec, const Rational& t,
                                    const std::vector<long long>& k);

CountResult remainder(const DomainSpec& spec, const Rational& t,
                      int threads = 1);

}  // namespace latlab
