#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace oamsim {

/// The four one-bit boolean functions.
enum class BoolFn { zero, one, x, not_x };

/// The two-qubit gate realizing |x,y> -> |x, y xor f(x)>.
enum class OracleId { identity, not_gate, cnot, zcnot };

enum class FnClass { constant, balanced };

inline constexpr std::array<OracleId, 4> kAllOracles{OracleId::identity, OracleId::not_gate, OracleId::cnot,
                                                      OracleId::zcnot};
inline constexpr std::array<BoolFn, 4> kAllFunctions{BoolFn::zero, BoolFn::one, BoolFn::x, BoolFn::not_x};

inline constexpr int evaluate(BoolFn f, int x)
{
    switch (f) {
    case BoolFn::zero: return 0;
    case BoolFn::one: return 1;
    case BoolFn::x: return x;
    case BoolFn::not_x: return x ^ 1;
    }
    return 0;
}

inline constexpr FnClass class_of(BoolFn f) { return evaluate(f, 0) == evaluate(f, 1) ? FnClass::constant : FnClass::balanced; }

inline constexpr BoolFn function_of(OracleId id)
{
    switch (id) {
    case OracleId::identity: return BoolFn::zero;
    case OracleId::not_gate: return BoolFn::one;
    case OracleId::cnot: return BoolFn::x;
    case OracleId::zcnot: return BoolFn::not_x;
    }
    return BoolFn::zero;
}

inline constexpr OracleId oracle_of(BoolFn f)
{
    switch (f) {
    case BoolFn::zero: return OracleId::identity;
    case BoolFn::one: return OracleId::not_gate;
    case BoolFn::x: return OracleId::cnot;
    case BoolFn::not_x: return OracleId::zcnot;
    }
    return OracleId::identity;
}

std::string_view to_string(OracleId id);
std::string_view to_string(BoolFn f);
std::string_view to_string(FnClass c);
std::optional<OracleId> parse_oracle(std::string_view name);

}  // namespace oamsim
