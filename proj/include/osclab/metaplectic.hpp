#pragma once

#include "osclab/fock.hpp"
#include "osclab/symplectic.hpp"
#include "osclab/weyl.hpp"

#include <utility>
#include <vector>

namespace osclab {

/// f_n^A = T_{A,h_n} f_n together with the (n, g) it was built from.
struct TransportedState {
  FockState state;
  int n;
  OrthoSymplectic source;
};

/// All multi-indices of the given level in d coordinates, in lexicographic order.
std::vector<MultiIndex> level_indices(std::size_t d, int level);

/// f_n^A with coefficients sqrt(n!/alpha!) prod_j U_{j1}^alpha_j on |alpha| = n,
/// U = to_unitary(g), at h = hbar_schedule(n, d, slack). The vacuum maps to itself
/// with coefficient +1.
TransportedState transport_reference(int n, const OrthoSymplectic& g, double slack = 0.0);

/// T_{A,h} on an arbitrary finite state: each A_j^* is replaced by sum_k U_kj A_k^*,
/// which preserves every energy level.
FockState transport_state(const OrthoSymplectic& g, const FockState& u);

/// |p^w(state) - state|, with p^w applied through the Weyl quantization.
double verify_eigen(const FockState& state);
double verify_eigen(const TransportedState& state);

/// (<a^w T u, T v>, <(a o g)^w u, v>); the second value goes through exact symbol
/// substitution, the first through the transported states.
std::pair<Complex, Complex> covariance_check(const PolySymbol& a, const OrthoSymplectic& g, const FockState& u,
                                             const FockState& v);

}  // namespace osclab
