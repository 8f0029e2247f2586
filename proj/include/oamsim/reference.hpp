#pragma once

// Circuit-model Deutsch algorithm: H (x) H, U_f, H on the first qubit, measure
// the first qubit. Independent of the optical simulation; used to cross-check it.

#include <Eigen/Dense>

#include "oamsim/oracle.hpp"

namespace oamsim::reference {

/// Amplitudes over |x,y>, index 2x + y.
using TwoQubitState = Eigen::Vector4cd;

TwoQubitState ket(int x, int y);
TwoQubitState hadamard_both(const TwoQubitState& s);
TwoQubitState hadamard_first(const TwoQubitState& s);
TwoQubitState apply_uf(const TwoQubitState& s, BoolFn f);

/// Probability that the first qubit reads 0; the second qubit is summed over.
double prob_first_zero(const TwoQubitState& s);

FnClass classify_abstract(BoolFn f);

}  // namespace oamsim::reference
