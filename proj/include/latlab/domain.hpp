#pragma once

// The model domain family
//
//   D = { x : sum_p ( sum_{l in block p} x_l^{omega_l} )^{m_{p+1}} <= 1 },
//
// its validation, defining function F, coupling-exponent tables, the
// predicted remainder exponents, closed-form volume, and basic convex
// geometry (radial boundary, support points).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace latlab {

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& msg, int index = -1)
      : std::runtime_error(msg), index(index) {}
  int index;  // offending coordinate/block when applicable, else -1
};

struct ExponentTable {
  std::vector<int> p_of;               // coordinate -> block (0-based)
  std::vector<std::vector<int>> m_jl;  // d x d coupling exponents
  std::vector<double> nu;              // nu_j = sum_{l != j} 1/(m_jl w_l)
  std::vector<long long> eta;          // lcm of m_jl * w_l over l != j
};

struct DomainSpec {
  int d = 0;
  std::vector<std::vector<int>> blocks;  // omegas per block, coordinate order
  std::vector<int> ms;                   // outer exponents, one per block
  std::vector<int> omega;                // flattened, coordinate -> omega_l
  ExponentTable table;
  std::string name;

  int omega_max() const;  // max over (j,l) of m_jl * omega_l
};

// Checks all invariants (even omegas >= 2, ms >= 1, nonempty blocks,
// block sizes summing to d) and computes the derived tables.
DomainSpec validate_spec(int d, std::vector<std::vector<int>> blocks,
                         std::vector<int> ms, std::string name = "");

// JSON form: {"d":3,"blocks":[{"omegas":[4]},{"omegas":[4,4]}],"ms":[2,2]}
DomainSpec spec_from_json(const std::string& text);
std::string spec_to_json(const DomainSpec& spec);

// F(x) = sum_p (sum_l x_l^{omega_l})^{m_p} - 1; negative inside, zero on
// the boundary, positive outside.
double eval_F(const DomainSpec& spec, std::span<const double> x);
void grad_F(const DomainSpec& spec, std::span<const double> x,
            std::span<double> g);
int m_exponent(const DomainSpec& spec, int j, int l);  // 0-based

struct ExponentTerm {
  int j = 0;                // axis (0-based)
  std::vector<int> subset;  // S for subset terms (0-based, contains j); empty
                            // for axis terms
  double exponent = 0.0;
};

struct ExponentReport {
  std::vector<ExponentTerm> axis_terms;
  std::vector<ExponentTerm> subset_terms;
  int omega_max = 0;
  double randol_exponent = 0.0;    // (d-1)(1 - 1/omega)
  double generic_exponent = 0.0;   // d - 2 + 2/(d+1)
  double overall = 0.0;            // max of the simplified pair
  double max_term = 0.0;           // max over the enumerated term list
  bool consistent = false;         // overall == max_term (holds on the corpus)
};

ExponentReport predicted_exponents(const DomainSpec& spec);
std::string exponent_report_json(const DomainSpec& spec);

// Closed-form volume via the block-wise Dirichlet reduction.
double volume(const DomainSpec& spec);

// Quasi-Monte Carlo membership oracle (Halton set, innermost coordinate
// integrated as an exact chord length). Independent of the closed form.
double volume_qmc(const DomainSpec& spec, std::int64_t n_points,
                  std::uint64_t seed);

// Unique r > 0 with F(r * u / |u|) = 0.
double radial_boundary(const DomainSpec& spec, std::span<const double> u);

// Boundary point whose outward normal is xi/|xi| (the maximizer of
// <x, xi> over D). Solved by monotone nested bisection on the KKT system.
std::vector<double> support_point(const DomainSpec& spec,
                                  std::span<const double> xi);
double support_function(const DomainSpec& spec, std::span<const double> xi);

// Largest c such that (c, c, ..., c) lies in D.
double diagonal_extent(const DomainSpec& spec);

// The fixed regression corpus: ball-d3, superspheres omega in {4,6,8} for
// d in {3,4}, the two-block Kraetzel-Nowak form, and a three-block d=5
// spec.
std::vector<DomainSpec> builtin_corpus();
DomainSpec builtin_spec(const std::string& name);

}  // namespace latlab
