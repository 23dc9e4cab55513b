#pragma once
#include <functional>

#include "dxl/exact/hamiltonian.hpp"

namespace dxl {

struct KrylovOptions {
    double tol = 1e-10;   // local error estimate per step
    int max_dim = 40;     // Lanczos dimension cap
    double substep = 0.01;  // internal step in 1/J
};

// One step of exp(-i H dt) |v> by Lanczos with full reorthogonalization and
// an adaptive subspace dimension. Throws NumericalError when the residual
// estimate cannot be brought under tol at max_dim.
void krylov_step(const std::function<void(const VectorXcd&, VectorXcd&)>& matvec, VectorXcd& v,
                 double dt, const KrylovOptions& opt = {});

// Advances a sector-layout state by exp(-i H dt). Sector-blocked Hamiltonians
// propagate each occupied sector independently; XYZ ones use a single Lanczos
// over the occupied space.
void krylov_propagate(const SectorBlockedHamiltonian& h, BlockedState& state, double dt,
                      const KrylovOptions& opt = {});

} // namespace dxl
