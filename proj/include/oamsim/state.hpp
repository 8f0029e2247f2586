#pragma once

// Truncated spin (polarization) x orbital-angular-momentum Hilbert space of a
// single photon, the states living in it, and the operators acting on it.
//
// Basis ordering: index(pol, l) = pol_index(pol) * (2 * l_max + 1) + (l + l_max)
// with pol_index(L) = 0 and pol_index(R) = 1.

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oamsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Amplitude would leave the truncated OAM range, or the range is too small.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Operands built on different mode spaces.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Parameter outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Circular polarization; L carries SAM +1, R carries SAM -1.
enum class Pol { L = 0, R = 1 };

/// Linear polarization axes used by polarizers and the PBS.
enum class Axis { H, V };

inline constexpr int sam(Pol p) { return p == Pol::L ? +1 : -1; }
inline constexpr Pol flipped(Pol p) { return p == Pol::L ? Pol::R : Pol::L; }
char to_char(Pol p);
char to_char(Axis a);

namespace polarization {

/// Components of |L>, |R> in the H/V basis: |L> = (|H> + i|V>)/sqrt2,
/// |R> = (|H> - i|V>)/sqrt2.
Eigen::Vector2cd ket_hv(Pol p);

/// Components of |H>, |V> in the L/R basis (inverse of ket_hv).
Eigen::Vector2cd ket_lr(Axis a);

/// Converts a 2x2 Jones matrix written in H/V coordinates into L/R coordinates.
Eigen::Matrix2cd to_circular(const Eigen::Matrix2cd& jones_hv);

}  // namespace polarization

inline constexpr int kMinLMax = 4;
inline constexpr int kDefaultLMax = 6;

class ModeSpace {
public:
    int l_max() const { return l_max_; }
    int oam_count() const { return 2 * l_max_ + 1; }
    int dimension() const { return 2 * oam_count(); }

    bool contains(int l) const { return l >= -l_max_ && l <= l_max_; }

    /// Throws TruncationError when |l| > l_max.
    int index(Pol p, int l) const;

    Pol pol_at(int index) const { return index < oam_count() ? Pol::L : Pol::R; }
    int oam_at(int index) const { return index % oam_count() - l_max_; }

    friend bool operator==(const ModeSpace&, const ModeSpace&) = default;

private:
    explicit ModeSpace(int l_max) : l_max_(l_max) {}
    friend ModeSpace make_space(int l_max);

    int l_max_;
};

/// Rejects l_max < kMinLMax: the CNOT bench passes through l = +-4.
ModeSpace make_space(int l_max = kDefaultLMax);

class PhotonState {
public:
    /// Normalizes `amplitudes`; throws DomainError on a zero vector or a
    /// survival outside [0, 1].
    PhotonState(ModeSpace space, Vector amplitudes, double survival = 1.0);

    const ModeSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex amplitude(Pol p, int l) const { return amplitudes_[space_.index(p, l)]; }
    double survival() const { return survival_; }

private:
    ModeSpace space_;
    Vector amplitudes_;
    double survival_;
};

PhotonState basis_state(const ModeSpace& space, Pol p, int l);

enum class OpKind { unitary, lossy };

/// A dense operator on the mode space.
///
/// Loss is a heralded scalar: the matrix is always unitary and the
/// probability that the photon survives the element is `survival_factor`.
///
/// Truncated OAM ladders cannot be represented exactly, so elements that
/// shift OAM close their permutation inside the truncation and record the
/// columns where that happens as guard rows. `apply` refuses any state with
/// weight on a guard row. For composed chains, each guard row is pulled back
/// through the elements that precede it.
class ElementOp {
public:
    struct Guard {
        Eigen::RowVectorXcd row;
        std::string description;
    };

    ElementOp(ModeSpace space, Matrix matrix, double survival_factor,
              std::string label, std::vector<Guard> guards = {});

    const ModeSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    OpKind kind() const { return survival_factor_ < 1.0 ? OpKind::lossy : OpKind::unitary; }
    double survival_factor() const { return survival_factor_; }
    const std::string& label() const { return label_; }
    std::span<const Guard> guards() const { return guards_; }

    /// Probability weight `state` would put outside the truncation.
    double overflow_weight(const Vector& amplitudes) const;

private:
    ModeSpace space_;
    Matrix matrix_;
    double survival_factor_;
    std::string label_;
    std::vector<Guard> guards_;
};

ElementOp identity_op(const ModeSpace& space, std::string label = "identity");

/// max |U^dagger U - I| over all entries.
double unitarity_defect(const Matrix& m);

inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kOverflowTol = 1e-20;

/// Applies `op`, renormalizes, and multiplies survival by the element factor.
/// Throws TruncationError if the state reaches a guarded column.
PhotonState apply(const ElementOp& op, const PhotonState& state);

/// Applies each element in order.
PhotonState apply_chain(std::span<const ElementOp> ops, const PhotonState& state);

/// Product in application order: the last element's matrix is leftmost.
ElementOp compose(std::span<const ElementOp> ops, std::string label = "");

/// |<a|b>|^2.
double fidelity_up_to_phase(const PhotonState& a, const PhotonState& b);

/// Polarization ket `pol_lr` (L/R components) tensored with an OAM superposition.
/// Weights are normalized; throws DomainError when they are all zero.
PhotonState product_state(const ModeSpace& space, const Eigen::Vector2cd& pol_lr,
                          std::span<const int> oam, std::span<const Complex> weights);

}  // namespace oamsim
