#pragma once

// Line-oriented description of an optical bench.
//
//   # comment
//   space lmax=6
//   prepare polarizer V
//   prepare hologram oam=2,-2 [weights=1,1]
//   qplate q=1 [eta=0.97]
//   lens
//   hwp theta=0 [aperture=l0] [crosstalk=0.1]
//   dove [angle=0]
//   measure pbs
//
// parse() checks syntax and collects one error per bad line; compile() checks
// physics (2q integrality, parameter ranges, truncation) and builds operators.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oamsim/deutsch.hpp"
#include "oamsim/elements.hpp"
#include "oamsim/state.hpp"

namespace oamsim::dsl {

struct ParseError {
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;
    std::string token;
};

std::string format(const ParseError& e);

struct SpaceDirective {
    int l_max = kDefaultLMax;
    friend bool operator==(const SpaceDirective&, const SpaceDirective&) = default;
};

struct PolarizerDirective {
    Axis axis = Axis::V;
    friend bool operator==(const PolarizerDirective&, const PolarizerDirective&) = default;
};

struct HologramDirective {
    std::vector<int> oam;
    std::vector<Complex> weights;  // empty: equal weights
    friend bool operator==(const HologramDirective&, const HologramDirective&) = default;
};

struct QPlateStmt {
    Rational q;
    std::optional<double> eta;
    friend bool operator==(const QPlateStmt&, const QPlateStmt&) = default;
};

struct HwpStmt {
    double theta = 0.0;
    std::optional<Aperture> aperture;
    std::optional<double> crosstalk;
    friend bool operator==(const HwpStmt&, const HwpStmt&) = default;
};

struct DoveStmt {
    std::optional<double> angle;
    friend bool operator==(const DoveStmt&, const DoveStmt&) = default;
};

struct LensStmt {
    friend bool operator==(const LensStmt&, const LensStmt&) = default;
};

using ElementStmt = std::variant<QPlateStmt, HwpStmt, DoveStmt, LensStmt>;

std::string_view keyword(const ElementStmt& s);

/// A statement with the line it came from. Equality ignores the line.
template <class T>
struct Located {
    T value;
    int line = 0;
    friend bool operator==(const Located& a, const Located& b) { return a.value == b.value; }
};

struct BenchFile {
    std::optional<Located<SpaceDirective>> space;
    std::optional<Located<PolarizerDirective>> polarizer;
    std::optional<Located<HologramDirective>> hologram;
    std::vector<Located<ElementStmt>> elements;
    std::optional<Located<MeasureKind>> measure;

    friend bool operator==(const BenchFile&, const BenchFile&) = default;
};

struct ParseResult {
    BenchFile bench;
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

ParseResult parse(std::string_view text);

/// Canonical text; floats carry 17 significant digits so parse(render(b)) == b.
std::string render(const BenchFile& bench);

/// Semantic or truncation failure, tied to a source line when there is one.
class CompileError : public Error {
public:
    enum class Kind { domain, truncation };

    CompileError(Kind kind, int line, std::string element, const std::string& message)
        : Error(message), kind_(kind), line_(line), element_(std::move(element))
    {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    const std::string& element() const { return element_; }

private:
    Kind kind_;
    int line_;
    std::string element_;
};

struct PreparationProgram {
    std::optional<Axis> polarizer;
    std::vector<int> oam{0};
    std::vector<Complex> weights{1.0};

    /// Source |L,0>, then hologram, then polarizer. Also returns the heralded
    /// polarizer transmission probability.
    std::pair<PhotonState, double> prepare(const ModeSpace& space) const;
};

struct CompiledBench {
    ModeSpace space;
    PreparationProgram preparation;
    std::vector<ElementOp> chain;
    std::vector<int> element_lines;
    MeasureKind measure = MeasureKind::pbs;
};

/// `l_max` overrides the file's space directive when given.
CompiledBench compile(const BenchFile& bench, std::optional<int> l_max = std::nullopt);

}  // namespace oamsim::dsl
