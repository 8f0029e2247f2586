#include "oamsim/state.hpp"

#include <cmath>
#include <numbers>

namespace oamsim {

char to_char(Pol p) { return p == Pol::L ? 'L' : 'R'; }
char to_char(Axis a) { return a == Axis::H ? 'H' : 'V'; }

namespace polarization {

Eigen::Vector2cd ket_hv(Pol p)
{
    const double r = std::numbers::sqrt2 / 2.0;
    const Complex i{0.0, 1.0};
    return p == Pol::L ? Eigen::Vector2cd{r, i * r} : Eigen::Vector2cd{r, -i * r};
}

Eigen::Vector2cd ket_lr(Axis a)
{
    // |H> = (|L> + |R>)/sqrt2, |V> = -i(|L> - |R>)/sqrt2
    const double r = std::numbers::sqrt2 / 2.0;
    const Complex i{0.0, 1.0};
    return a == Axis::H ? Eigen::Vector2cd{r, r} : Eigen::Vector2cd{-i * r, i * r};
}

Eigen::Matrix2cd to_circular(const Eigen::Matrix2cd& jones_hv)
{
    Eigen::Matrix2cd basis;
    basis.col(0) = ket_hv(Pol::L);
    basis.col(1) = ket_hv(Pol::R);
    return basis.adjoint() * jones_hv * basis;
}

}  // namespace polarization

int ModeSpace::index(Pol p, int l) const
{
    if (!contains(l)) {
        throw TruncationError("OAM l=" + std::to_string(l) + " outside truncation |l| <= " +
                              std::to_string(l_max_));
    }
    return static_cast<int>(p) * oam_count() + (l + l_max_);
}

ModeSpace make_space(int l_max)
{
    if (l_max < kMinLMax) {
        throw TruncationError("l_max=" + std::to_string(l_max) + " is insufficient; the CNOT bench needs l_max >= " +
                              std::to_string(kMinLMax));
    }
    return ModeSpace(l_max);
}

PhotonState::PhotonState(ModeSpace space, Vector amplitudes, double survival)
    : space_(space), amplitudes_(std::move(amplitudes)), survival_(survival)
{
    if (amplitudes_.size() != space_.dimension()) {
        throw DimensionMismatch("state vector has " + std::to_string(amplitudes_.size()) +
                                " entries, space dimension is " + std::to_string(space_.dimension()));
    }
    if (!(survival_ >= 0.0 && survival_ <= 1.0)) {
        throw DomainError("survival probability must lie in [0, 1]");
    }
    const double norm = amplitudes_.norm();
    if (norm == 0.0 || !std::isfinite(norm)) {
        throw DomainError("photon state has zero norm");
    }
    amplitudes_ /= norm;
}

PhotonState basis_state(const ModeSpace& space, Pol p, int l)
{
    Vector v = Vector::Zero(space.dimension());
    v[space.index(p, l)] = 1.0;
    return PhotonState(space, std::move(v));
}

ElementOp::ElementOp(ModeSpace space, Matrix matrix, double survival_factor, std::string label,
                     std::vector<Guard> guards)
    : space_(space), matrix_(std::move(matrix)), survival_factor_(survival_factor), label_(std::move(label)),
      guards_(std::move(guards))
{
    const auto n = space_.dimension();
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw DimensionMismatch("operator '" + label_ + "' is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!(survival_factor_ > 0.0 && survival_factor_ <= 1.0)) {
        throw DomainError("survival factor of '" + label_ + "' must lie in (0, 1]");
    }
    if (unitarity_defect(matrix_) >= kUnitarityTol) {
        throw DomainError("operator '" + label_ + "' is not unitary");
    }
    for (const auto& g : guards_) {
        if (g.row.size() != n) {
            throw DimensionMismatch("guard row of '" + label_ + "' has wrong length");
        }
    }
}

double ElementOp::overflow_weight(const Vector& amplitudes) const
{
    double weight = 0.0;
    for (const auto& g : guards_) {
        weight += std::norm((g.row * amplitudes)(0));
    }
    return weight;
}

ElementOp identity_op(const ModeSpace& space, std::string label)
{
    return ElementOp(space, Matrix::Identity(space.dimension(), space.dimension()), 1.0, std::move(label));
}

double unitarity_defect(const Matrix& m)
{
    if (m.rows() != m.cols()) return INFINITY;
    const Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

PhotonState apply(const ElementOp& op, const PhotonState& state)
{
    if (op.space() != state.space()) {
        throw DimensionMismatch("operator '" + op.label() + "' and state live in different mode spaces");
    }
    for (const auto& g : op.guards()) {
        if (std::norm((g.row * state.amplitudes())(0)) > kOverflowTol) {
            throw TruncationError(op.label() + ": " + g.description + " (l_max=" +
                                  std::to_string(op.space().l_max()) + ")");
        }
    }
    return PhotonState(state.space(), op.matrix() * state.amplitudes(), state.survival() * op.survival_factor());
}

PhotonState apply_chain(std::span<const ElementOp> ops, const PhotonState& state)
{
    PhotonState out = state;
    for (const auto& op : ops) out = apply(op, out);
    return out;
}

ElementOp compose(std::span<const ElementOp> ops, std::string label)
{
    if (ops.empty()) throw DomainError("cannot compose an empty element list");

    const ModeSpace space = ops.front().space();
    const auto n = space.dimension();
    Matrix prefix = Matrix::Identity(n, n);
    double survival = 1.0;
    std::vector<ElementOp::Guard> guards;
    std::string joined;

    for (const auto& op : ops) {
        if (op.space() != space) {
            throw DimensionMismatch("cannot compose '" + op.label() + "': mode spaces differ");
        }
        for (const auto& g : op.guards()) {
            guards.push_back({g.row * prefix, g.description});
        }
        prefix = op.matrix() * prefix;
        survival *= op.survival_factor();
        if (!joined.empty()) joined += " > ";
        joined += op.label();
    }
    return ElementOp(space, std::move(prefix), survival, label.empty() ? joined : std::move(label), std::move(guards));
}

double fidelity_up_to_phase(const PhotonState& a, const PhotonState& b)
{
    if (a.space() != b.space()) throw DimensionMismatch("fidelity between states of different mode spaces");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

PhotonState product_state(const ModeSpace& space, const Eigen::Vector2cd& pol_lr, std::span<const int> oam,
                          std::span<const Complex> weights)
{
    if (oam.size() != weights.size()) throw DomainError("OAM list and weight list differ in length");
    Vector v = Vector::Zero(space.dimension());
    for (std::size_t k = 0; k < oam.size(); ++k) {
        v[space.index(Pol::L, oam[k])] += pol_lr[0] * weights[k];
        v[space.index(Pol::R, oam[k])] += pol_lr[1] * weights[k];
    }
    return PhotonState(space, std::move(v));
}

}  // namespace oamsim
