#pragma once

// Logical two-qubit encoding on joint SAM/OAM kets and the four oracle benches.
//
//   |0,0> = |L,+2>   |0,1> = |R,-2>
//   |1,0> = |R,+2>   |1,1> = |L,-2>
//
// The encoding does not factor into a SAM qubit and an OAM qubit, so decode
// is only defined on these four joint kets.

#include <array>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "oamsim/oracle.hpp"
#include "oamsim/state.hpp"

namespace oamsim {

struct Bits {
    int x = 0;
    int y = 0;

    int index() const { return 2 * x + y; }
    friend bool operator==(const Bits&, const Bits&) = default;
};

/// A joint ket |pol, l>.
struct Ket {
    Pol pol;
    int l;
};

/// Raised when a state is not one of the four encoded kets.
class NotEncodedError : public Error {
public:
    using Error::Error;
};

/// Raised when a bench maps an encoded ket outside the encoded subspace.
class GateBrokenError : public Error {
public:
    using Error::Error;
};

Ket encoded_ket(Bits bits);
PhotonState encode(const ModeSpace& space, Bits bits);

/// Requires amplitude of modulus 1 (to 1e-9) on one encoded ket.
Bits decode(const PhotonState& state);

/// Optional elements inserted around the always-present QP1 L1 L2 QP2.
enum class Insert { HWP1, HWP2, HWP3, DP };

struct OracleBench {
    OracleId oracle;
    std::vector<ElementOp> elements;  // physical order
    std::set<Insert> inserted;

    ElementOp composed() const;
};

std::set<Insert> recipe(OracleId id);

/// Chain in physical order: [HWP2] QP1 L1 [HWP1] L2 QP2 [HWP3] [DP].
OracleBench build_oracle(const ModeSpace& space, OracleId id, double eta = 1.0, double crosstalk = 0.0);

struct TruthRow {
    Bits in;
    Bits out;
    Complex phase;  // amplitude on the output ket
};

/// Maps each encoded basis state through the composed bench.
/// Throws GateBrokenError if an output leaves the encoded subspace.
std::array<TruthRow, 4> truth_table(const OracleBench& bench);

/// Ideal U_f on |x,y> (row/column index 2x + y), built from f directly.
Eigen::Matrix4d logical_matrix(OracleId id);

/// X on the first logical qubit.
Eigen::Matrix4d flip_control();

/// The composed bench restricted to the encoded subspace:
/// entry (j, i) = <enc(j)| U |enc(i)>.
Eigen::Matrix4cd encoded_block(const ElementOp& op);

/// Weight left outside the encoded subspace, maximized over the four inputs.
double encoded_leakage(const ElementOp& op);

}  // namespace oamsim
