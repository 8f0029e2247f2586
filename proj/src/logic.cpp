#include "oamsim/logic.hpp"

#include <cmath>

#include "oamsim/elements.hpp"

namespace oamsim {

std::string_view to_string(OracleId id)
{
    switch (id) {
    case OracleId::identity: return "identity";
    case OracleId::not_gate: return "not";
    case OracleId::cnot: return "cnot";
    case OracleId::zcnot: return "zcnot";
    }
    return "?";
}

std::string_view to_string(BoolFn f)
{
    switch (f) {
    case BoolFn::zero: return "f(x)=0";
    case BoolFn::one: return "f(x)=1";
    case BoolFn::x: return "f(x)=x";
    case BoolFn::not_x: return "f(x)=x^1";
    }
    return "?";
}

std::string_view to_string(FnClass c) { return c == FnClass::constant ? "constant" : "balanced"; }

std::optional<OracleId> parse_oracle(std::string_view name)
{
    for (OracleId id : kAllOracles) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

Ket encoded_ket(Bits bits)
{
    static constexpr std::array<Ket, 4> kets{Ket{Pol::L, +2}, Ket{Pol::R, -2}, Ket{Pol::R, +2}, Ket{Pol::L, -2}};
    if (bits.x < 0 || bits.x > 1 || bits.y < 0 || bits.y > 1) throw DomainError("logical bits must be 0 or 1");
    return kets[bits.index()];
}

PhotonState encode(const ModeSpace& space, Bits bits)
{
    const Ket k = encoded_ket(bits);
    return basis_state(space, k.pol, k.l);
}

Bits decode(const PhotonState& state)
{
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const Ket k = encoded_ket({x, y});
            if (std::abs(std::abs(state.amplitude(k.pol, k.l)) - 1.0) < 1e-9) return {x, y};
        }
    }
    throw NotEncodedError("state is not one of the four encoded kets");
}

ElementOp OracleBench::composed() const { return compose(elements, std::string(to_string(oracle))); }

std::set<Insert> recipe(OracleId id)
{
    switch (id) {
    case OracleId::identity: return {};
    case OracleId::not_gate: return {Insert::HWP3, Insert::DP};
    case OracleId::cnot: return {Insert::HWP1};
    case OracleId::zcnot: return {Insert::HWP1, Insert::HWP2, Insert::HWP3};
    }
    return {};
}

OracleBench build_oracle(const ModeSpace& space, OracleId id, double eta, double crosstalk)
{
    const std::set<Insert> ins = recipe(id);
    const auto has = [&](Insert i) { return ins.contains(i); };

    std::vector<ElementOp> chain;
    if (has(Insert::HWP2)) chain.push_back(hwp(space, {0.0, Aperture::full, 0.0}, "HWP2"));
    chain.push_back(qplate(space, {Rational{1, 1}, eta}, "QP1"));
    chain.push_back(lens(space, "L1"));
    if (has(Insert::HWP1)) chain.push_back(hwp(space, {0.0, Aperture::l0_only, crosstalk}, "HWP1"));
    chain.push_back(lens(space, "L2"));
    chain.push_back(qplate(space, {Rational{1, 1}, eta}, "QP2"));
    if (has(Insert::HWP3)) chain.push_back(hwp(space, {0.0, Aperture::full, 0.0}, "HWP3"));
    if (has(Insert::DP)) chain.push_back(dove_prism(space, {}, "DP"));
    return {id, std::move(chain), ins};
}

std::array<TruthRow, 4> truth_table(const OracleBench& bench)
{
    const ElementOp u = bench.composed();
    const ModeSpace& space = u.space();
    std::array<TruthRow, 4> rows{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const Bits in{x, y};
            const PhotonState out = apply(u, encode(space, in));
            Bits decoded;
            try {
                decoded = decode(out);
            } catch (const NotEncodedError&) {
                throw GateBrokenError(std::string(to_string(bench.oracle)) + " bench maps |" + std::to_string(x) +
                                      "," + std::to_string(y) + "> outside the encoded subspace");
            }
            const Ket k = encoded_ket(decoded);
            rows[in.index()] = {in, decoded, out.amplitude(k.pol, k.l)};
        }
    }
    return rows;
}

Eigen::Matrix4d logical_matrix(OracleId id)
{
    const BoolFn f = function_of(id);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const Bits out{x, y ^ evaluate(f, x)};
            m(out.index(), Bits{x, y}.index()) = 1.0;
        }
    }
    return m;
}

Eigen::Matrix4d flip_control()
{
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) m(Bits{x ^ 1, y}.index(), Bits{x, y}.index()) = 1.0;
    }
    return m;
}

Eigen::Matrix4cd encoded_block(const ElementOp& op)
{
    const ModeSpace& space = op.space();
    Eigen::Matrix4cd block;
    for (int j = 0; j < 4; ++j) {
        const Ket out = encoded_ket({j / 2, j % 2});
        for (int i = 0; i < 4; ++i) {
            const Ket in = encoded_ket({i / 2, i % 2});
            block(j, i) = op.matrix()(space.index(out.pol, out.l), space.index(in.pol, in.l));
        }
    }
    return block;
}

double encoded_leakage(const ElementOp& op)
{
    const Eigen::Matrix4cd block = encoded_block(op);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, 1.0 - block.col(i).squaredNorm());
    return worst;
}

}  // namespace oamsim
