#pragma once

#include "scatteq/cayley.hpp"
#include "scatteq/cluster.hpp"
#include "scatteq/scattering.hpp"

namespace scatteq {

// O' = A^dag O A. Refuses A whose unitarity residual exceeds the tolerance.
Op conjugate(const Op& o, const Op& a, double unitarity_tol = 1e-8);

// Rank-one transformed two-body interaction
// V' = V + f* |g><g| H + f H |g><g| + |f|^2 <g|H|g> |g><g|, H = T + V.
struct TwoBodyTransform {
  double lambda;
  cplx f;
  Vec g;        // as used (not normalized; f carries <g|g>)
  Op v_prime;   // on-grid matrix
};

TwoBodyTransform transformed_two_body(const Op& v, const Op& t, double lambda,
                                      const Vec& g);

// Same transform as an off-grid evaluable potential:
// V'(k,k') = V(k,k') + f* g(k) h(k') + f h(k) g(k') + |f|^2 <g|H|g> g(k) g(k'),
// h = H g evaluated by quadrature on the construction grid.
class TransformedPotential final : public Potential {
public:
  TransformedPotential(PotentialPtr base, GridPtr grid, double mu, double lambda,
                       FormFactor gff);
  cplx eval(double k, double kp) const override;
  int partial_wave() const override { return base_->partial_wave(); }
  cplx f() const { return f_; }

private:
  double g_of(double k) const { return gff_(k); }
  cplx h_of(double k) const;  // (H g)(k), kinetic part exact, V part by quadrature

  PotentialPtr base_;
  GridPtr grid_;
  double mu_;
  cplx f_;
  FormFactor gff_;
  double a6_;  // <g|H|g>
};

// Transformed system sharing the original grid and mass.
TwoBodySystem transformed_system(const TwoBodySystem& sys, double lambda,
                                 const FormFactor& gff);

// Three-body Hamiltonian as a cluster family on a tensor space:
// component at the bottom partition = kinetic energy, two-cluster components
// = pair interactions, top component = connected three-body force.
// (Any of them may be absent = zero.)

// Transformed cluster potentials V'_a = A_a^dag (T + V_a) A_a - T for the
// two-cluster partitions a.
std::map<Partition, Op> transformed_cluster_potentials(const ClusterOperator& h,
                                                       const GeneratorSpec& gen);

// Connected part [H']_1 of H' = A^dag H A by the subtraction route
// [H']_1 = H' - sum_{a != top} C_a A_a^dag H_a A_a.
Op induced_connected_mobius(const ClusterOperator& h, const GeneratorSpec& gen);

// The same connected part assembled term by term from cluster components of A
// (every term a product of connected pieces): with C = [A]_(123) and
// W_a = sum_{b != a} V_b + V_123,
//   [H']_1 = C^dag H A
//          + sum_a [A]_a^dag ((T + V_a)(sum_{b != a} [A]_b + C) + W_a A)
//          + T C + sum_a V_a (sum_{b != a} [A]_b + C) + V_123 A.
// N = 3 only.
Op induced_connected_assembly(const ClusterOperator& h, const GeneratorSpec& gen);

struct IndependenceSweep {
  std::vector<double> factors;
  double max_two_cluster_drift = 0.0;  // elementwise, across the sweep
  std::vector<double> v123_norms;      // weighted norm of [H']_1 per factor
  bool two_body_independent = false;   // drift <= 1e-12 * scale
  bool three_body_varies = false;      // some pair of norms differs > 1e-6
};

// Sweep the connected-component strength of the generator and watch the
// transformed two-cluster potentials stay fixed while [H']_1 moves.
IndependenceSweep two_body_independence(const ClusterOperator& h,
                                        const GeneratorSpec& gen,
                                        const Partition& connected,
                                        const std::vector<double>& factors);

}  // namespace scatteq
