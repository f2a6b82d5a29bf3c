#pragma once

// Named dynamics used by scenarios, suites and tests.

#include <vector>

#include <Eigen/Dense>

#include "qsl/dynamics.hpp"

namespace qsl::channels {

using dynamics::ComplexMatrix;
using dynamics::DensityMatrix;
using dynamics::HermitianObservable;
using dynamics::KrausSchedule;

// Qubit phase damping: Bloch (x, y, z) -> (e^{-gt} x, e^{-gt} y, z).
KrausSchedule dephasing(double rate);
// Qubit decay to |0>: n_z -> 1 - (1 - n_z) e^{-gt}, transverse part scaled by e^{-gt/2}.
KrausSchedule amplitude_damping(double rate);
// Qubit depolarizing: n -> e^{-gt} n.
KrausSchedule depolarizing(double rate);

// H = (omega/2) a.sigma for a nonzero axis a (normalised internally).
dynamics::HamiltonianEvolution precession(double omega, const Eigen::Vector3d& axis);

// Interpolates the identity map with a fixed channel {E_j}:
// {sqrt(e^{-gt}) I, sqrt(1 - e^{-gt}) E_j}. The E_j must be trace preserving.
KrausSchedule custom_kraus(const std::vector<ComplexMatrix>& channel, double rate);

// Single Kraus operator e^{-itH}.
KrausSchedule unitary(const HermitianObservable& hamiltonian);

// rho_t = (1 - t/tau) rho + (t/tau) target for every input rho, realised as
// {sqrt(1 - t/tau) I, sqrt(t p_i / tau) |phi_i><j|} with target = sum p_i |phi_i><phi_i|.
KrausSchedule replacement(const DensityMatrix& target, double tau);

// Same schedule without its derivative family, to exercise the finite-difference path.
KrausSchedule without_derivatives(KrausSchedule schedule);

// Jump-operator shorthands for qubit Lindblad generators.
ComplexMatrix sigma_minus();

}  // namespace qsl::channels
