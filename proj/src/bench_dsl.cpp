#include "oamsim/bench_dsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "oamsim/numfmt.hpp"

namespace oamsim::dsl {

std::string format(const ParseError& e)
{
    std::string s = "line " + std::to_string(e.line) + ", column " + std::to_string(e.column) + ": " + e.message;
    if (!e.token.empty()) s += " ('" + e.token + "')";
    return s;
}

std::string_view keyword(const ElementStmt& s)
{
    return std::visit(
        [](const auto& v) -> std::string_view {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, QPlateStmt>) return "qplate";
            else if constexpr (std::is_same_v<T, HwpStmt>) return "hwp";
            else if constexpr (std::is_same_v<T, DoveStmt>) return "dove";
            else return "lens";
        },
        s);
}

namespace {

// ---------------------------------------------------------------------------
// Lexical helpers

struct Token {
    std::string_view text;
    int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

std::optional<double> parse_double(std::string_view s)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view s)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// "p/q" or an exact decimal such as "-0.5".
std::optional<Rational> parse_rational(std::string_view s)
{
    constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 10;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto p = parse_int(s.substr(0, slash));
        const auto q = parse_int(s.substr(slash + 1));
        if (!p || !q || *q == 0 || std::llabs(*p) > kLimit || std::llabs(*q) > kLimit) return std::nullopt;
        return Rational::make(*p, *q);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : s) {
        if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            if (num > kLimit || den > kLimit) return std::nullopt;
            num = num * 10 + (c - '0');
            if (seen_dot) den *= 10;
            seen_digit = true;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;
    return Rational::make(negative ? -num : num, den);
}

// "a", "bi", "a+bi", "a-bi"; a bare "i" means 1i.
std::optional<Complex> parse_complex(std::string_view s)
{
    if (auto re = parse_double(s)) return Complex{*re, 0.0};
    if (s.empty() || s.back() != 'i') return std::nullopt;
    s.remove_suffix(1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string_view re_text = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
    std::string_view im_text = split == std::string_view::npos ? s : s.substr(split);
    double re = 0.0;
    if (!re_text.empty()) {
        const auto r = parse_double(re_text);
        if (!r) return std::nullopt;
        re = *r;
    }
    double im = 1.0;
    if (im_text == "+" || im_text.empty()) im = 1.0;
    else if (im_text == "-") im = -1.0;
    else if (const auto v = parse_double(im_text)) im = *v;
    else return std::nullopt;
    return Complex{re, im};
}

std::string render_complex(Complex c)
{
    if (c.imag() == 0.0) return format_number(c.real());
    if (c.real() == 0.0) return format_number(c.imag()) + "i";
    return format_number(c.real()) + (std::signbit(c.imag()) ? "" : "+") + format_number(c.imag()) + "i";
}

template <class T, class F>
std::optional<std::vector<T>> parse_list(std::string_view s, F&& item)
{
    std::vector<T> out;
    while (true) {
        const auto comma = s.find(',');
        const auto v = item(s.substr(0, comma));
        if (!v) return std::nullopt;
        out.push_back(*v);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Line parser. Each line yields either a statement or exactly one error.

struct LineError {
    int column;
    std::string message;
    std::string token;
};

struct KeyValue {
    std::string_view key;
    std::string_view value;
    int key_column;
    int value_column;
};

class LineParser {
public:
    LineParser(BenchFile& bench, int line_no) : bench_(bench), line_(line_no) {}

    std::optional<LineError> parse(const std::vector<Token>& tokens)
    {
        const Token& head = tokens.front();
        const std::vector<Token> rest(tokens.begin() + 1, tokens.end());
        if (head.text == "space") return parse_space(head, rest);
        if (head.text == "prepare") return parse_prepare(head, rest);
        if (head.text == "measure") return parse_measure(head, rest);
        if (head.text == "qplate") return parse_qplate(head, rest);
        if (head.text == "hwp") return parse_hwp(head, rest);
        if (head.text == "dove") return parse_dove(head, rest);
        if (head.text == "lens") {
            if (!rest.empty()) return LineError{rest[0].column, "lens takes no parameters", std::string(rest[0].text)};
            bench_.elements.push_back({LensStmt{}, line_});
            return std::nullopt;
        }
        return LineError{head.column, "unknown statement", std::string(head.text)};
    }

private:
    using Params = std::map<std::string_view, KeyValue>;

    /// Splits key=value tokens, rejecting unknown or repeated keys.
    std::optional<LineError> collect(const std::vector<Token>& tokens, const std::set<std::string_view>& allowed,
                                     Params& out)
    {
        for (const Token& t : tokens) {
            const auto eq = t.text.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                return LineError{t.column, "expected key=value", std::string(t.text)};
            }
            const KeyValue kv{t.text.substr(0, eq), t.text.substr(eq + 1), t.column,
                              t.column + static_cast<int>(eq) + 1};
            if (!allowed.contains(kv.key)) return LineError{t.column, "unknown parameter", std::string(kv.key)};
            if (out.contains(kv.key)) return LineError{t.column, "duplicate parameter", std::string(kv.key)};
            if (kv.value.empty()) return LineError{kv.value_column, "missing value for '" + std::string(kv.key) + "'", ""};
            out.emplace(kv.key, kv);
        }
        return std::nullopt;
    }

    static LineError bad_value(const KeyValue& kv, const std::string& what)
    {
        return LineError{kv.value_column, "malformed " + what + " for '" + std::string(kv.key) + "'",
                         std::string(kv.value)};
    }

    std::optional<LineError> real_param(const Params& p, std::string_view key, std::optional<double>& out)
    {
        const auto it = p.find(key);
        if (it == p.end()) return std::nullopt;
        out = parse_double(it->second.value);
        if (!out) return bad_value(it->second, "number");
        return std::nullopt;
    }

    std::optional<LineError> parse_space(const Token& head, const std::vector<Token>& rest)
    {
        Params p;
        if (auto e = collect(rest, {"lmax"}, p)) return e;
        if (!p.contains("lmax")) return LineError{head.column, "space requires lmax=<int>", std::string(head.text)};
        const KeyValue& kv = p.at("lmax");
        const auto v = parse_int(kv.value);
        if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
            return bad_value(kv, "integer");
        }
        if (bench_.space) return LineError{head.column, "duplicate space directive", std::string(head.text)};
        bench_.space = Located<SpaceDirective>{{static_cast<int>(*v)}, line_};
        return std::nullopt;
    }

    std::optional<LineError> parse_prepare(const Token& head, const std::vector<Token>& rest)
    {
        if (rest.empty()) return LineError{head.column, "prepare requires 'polarizer' or 'hologram'", std::string(head.text)};
        const Token& what = rest[0];
        if (what.text == "polarizer") {
            if (rest.size() != 2) {
                const int col = rest.size() < 2 ? what.column : rest[2].column;
                return LineError{col, "expected 'prepare polarizer <H|V>'", rest.size() < 2 ? "" : std::string(rest[2].text)};
            }
            const Token& axis = rest[1];
            if (axis.text != "H" && axis.text != "V") {
                return LineError{axis.column, "polarizer axis must be H or V", std::string(axis.text)};
            }
            if (bench_.polarizer) return LineError{head.column, "duplicate polarizer directive", std::string(what.text)};
            bench_.polarizer = Located<PolarizerDirective>{{axis.text == "H" ? Axis::H : Axis::V}, line_};
            return std::nullopt;
        }
        if (what.text == "hologram") {
            Params p;
            if (auto e = collect({rest.begin() + 1, rest.end()}, {"oam", "weights"}, p)) return e;
            if (!p.contains("oam")) return LineError{what.column, "hologram requires oam=<int>[,<int>...]", std::string(what.text)};
            HologramDirective h;
            const KeyValue& oam = p.at("oam");
            auto ls = parse_list<int>(oam.value, [](std::string_view s) -> std::optional<int> {
                const auto v = parse_int(s);
                if (!v || std::llabs(*v) > 1000000) return std::nullopt;
                return static_cast<int>(*v);
            });
            if (!ls) return bad_value(oam, "OAM list");
            h.oam = std::move(*ls);
            if (p.contains("weights")) {
                const KeyValue& w = p.at("weights");
                auto ws = parse_list<Complex>(w.value, parse_complex);
                if (!ws) return bad_value(w, "weight list");
                h.weights = std::move(*ws);
            }
            if (bench_.hologram) return LineError{head.column, "duplicate hologram directive", std::string(what.text)};
            bench_.hologram = Located<HologramDirective>{std::move(h), line_};
            return std::nullopt;
        }
        return LineError{what.column, "unknown preparation", std::string(what.text)};
    }

    std::optional<LineError> parse_measure(const Token& head, const std::vector<Token>& rest)
    {
        if (rest.size() != 1) {
            const int col = rest.empty() ? head.column : rest[1].column;
            return LineError{col, "expected 'measure <pbs|oam_sorter>'", rest.empty() ? "" : std::string(rest[1].text)};
        }
        const Token& kind = rest[0];
        if (kind.text != "pbs" && kind.text != "oam_sorter") {
            return LineError{kind.column, "measurement must be pbs or oam_sorter", std::string(kind.text)};
        }
        if (bench_.measure) return LineError{head.column, "duplicate measure directive", std::string(head.text)};
        bench_.measure = Located<MeasureKind>{kind.text == "pbs" ? MeasureKind::pbs : MeasureKind::oam_sorter, line_};
        return std::nullopt;
    }

    std::optional<LineError> parse_qplate(const Token& head, const std::vector<Token>& rest)
    {
        Params p;
        if (auto e = collect(rest, {"q", "eta"}, p)) return e;
        if (!p.contains("q")) return LineError{head.column, "qplate requires q=<rational>", std::string(head.text)};
        QPlateStmt s;
        const auto q = parse_rational(p.at("q").value);
        if (!q) return bad_value(p.at("q"), "rational");
        s.q = *q;
        if (auto e = real_param(p, "eta", s.eta)) return e;
        bench_.elements.push_back({s, line_});
        return std::nullopt;
    }

    std::optional<LineError> parse_hwp(const Token& head, const std::vector<Token>& rest)
    {
        Params p;
        if (auto e = collect(rest, {"theta", "aperture", "crosstalk"}, p)) return e;
        if (!p.contains("theta")) return LineError{head.column, "hwp requires theta=<float>", std::string(head.text)};
        HwpStmt s;
        std::optional<double> theta;
        if (auto e = real_param(p, "theta", theta)) return e;
        s.theta = *theta;
        if (const auto it = p.find("aperture"); it != p.end()) {
            if (it->second.value == "all") s.aperture = Aperture::full;
            else if (it->second.value == "l0") s.aperture = Aperture::l0_only;
            else return bad_value(it->second, "aperture (all|l0)");
        }
        if (auto e = real_param(p, "crosstalk", s.crosstalk)) return e;
        bench_.elements.push_back({s, line_});
        return std::nullopt;
    }

    std::optional<LineError> parse_dove(const Token&, const std::vector<Token>& rest)
    {
        Params p;
        if (auto e = collect(rest, {"angle"}, p)) return e;
        DoveStmt s;
        if (auto e = real_param(p, "angle", s.angle)) return e;
        bench_.elements.push_back({s, line_});
        return std::nullopt;
    }

    BenchFile& bench_;
    int line_;
};

}  // namespace

ParseResult parse(std::string_view text)
{
    ParseResult result;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::vector<Token> tokens = tokenize(line);
        if (tokens.empty()) continue;

        LineParser parser(result.bench, line_no);
        if (auto err = parser.parse(tokens)) {
            result.errors.push_back({line_no, err->column, std::move(err->message), std::move(err->token)});
        }
    }
    return result;
}

std::string render(const BenchFile& bench)
{
    std::string out;
    const auto line = [&](const std::string& s) { out += s + "\n"; };

    if (bench.space) line("space lmax=" + std::to_string(bench.space->value.l_max));
    if (bench.polarizer) line(std::string("prepare polarizer ") + to_char(bench.polarizer->value.axis));
    if (bench.hologram) {
        const auto& h = bench.hologram->value;
        std::string s = "prepare hologram oam=";
        for (std::size_t k = 0; k < h.oam.size(); ++k) s += (k ? "," : "") + std::to_string(h.oam[k]);
        if (!h.weights.empty()) {
            s += " weights=";
            for (std::size_t k = 0; k < h.weights.size(); ++k) s += (k ? "," : "") + render_complex(h.weights[k]);
        }
        line(s);
    }
    for (const auto& e : bench.elements) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, QPlateStmt>) {
                    std::string s = "qplate q=" + to_string(v.q);
                    if (v.eta) s += " eta=" + format_number(*v.eta);
                    line(s);
                } else if constexpr (std::is_same_v<T, HwpStmt>) {
                    std::string s = "hwp theta=" + format_number(v.theta);
                    if (v.aperture) s += *v.aperture == Aperture::full ? " aperture=all" : " aperture=l0";
                    if (v.crosstalk) s += " crosstalk=" + format_number(*v.crosstalk);
                    line(s);
                } else if constexpr (std::is_same_v<T, DoveStmt>) {
                    line(v.angle ? "dove angle=" + format_number(*v.angle) : "dove");
                } else {
                    line("lens");
                }
            },
            e.value);
    }
    if (bench.measure) line("measure " + std::string(to_string(bench.measure->value)));
    return out;
}

// ---------------------------------------------------------------------------
// Compilation

std::pair<PhotonState, double> PreparationProgram::prepare(const ModeSpace& space) const
{
    PhotonState state = hologram(basis_state(space, Pol::L, 0), oam, weights);
    double probability = 1.0;
    if (polarizer) {
        auto r = oamsim::polarizer(state, *polarizer);
        if (!r.state) throw DomainError("polarizer blocks the source photon");
        state = *r.state;
        probability = r.probability;
    }
    return {state, probability};
}

namespace {

std::string describe(const Located<ElementStmt>& e, std::size_t position)
{
    return std::string(keyword(e.value)) + " #" + std::to_string(position + 1) + " (line " + std::to_string(e.line) +
           ")";
}

int oam_shift(const Rational& q) { return static_cast<int>(2 * q.num / q.den); }

ElementOp build(const ModeSpace& space, const ElementStmt& stmt, std::string label)
{
    return std::visit(
        [&](const auto& v) -> ElementOp {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, QPlateStmt>) {
                return qplate(space, {v.q, v.eta.value_or(1.0)}, std::move(label));
            } else if constexpr (std::is_same_v<T, HwpStmt>) {
                return hwp(space, {v.theta, v.aperture.value_or(Aperture::full), v.crosstalk.value_or(0.0)},
                           std::move(label));
            } else if constexpr (std::is_same_v<T, DoveStmt>) {
                return dove_prism(space, {v.angle.value_or(0.0)}, std::move(label));
            } else {
                return lens(space, std::move(label));
            }
        },
        stmt);
}

void check_ranges(const Located<ElementStmt>& e, std::size_t position)
{
    const auto fail = [&](const std::string& msg) {
        throw CompileError(CompileError::Kind::domain, e.line, describe(e, position), describe(e, position) + ": " + msg);
    };
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, QPlateStmt>) {
                if ((2 * v.q.num) % v.q.den != 0) fail("2q is not an integer for q=" + to_string(v.q));
                if (v.eta && !(*v.eta > 0.0 && *v.eta <= 1.0)) fail("eta must lie in (0, 1]");
            } else if constexpr (std::is_same_v<T, HwpStmt>) {
                if (v.crosstalk && !(*v.crosstalk >= 0.0 && *v.crosstalk <= 1.0)) fail("crosstalk must lie in [0, 1]");
            } else if constexpr (std::is_same_v<T, DoveStmt>) {
                if (v.angle && *v.angle != 0.0) fail("only angle=0 is supported");
            }
        },
        e.value);
}

double weight_beyond(const PhotonState& s, int l_max)
{
    double w = 0.0;
    for (int i = 0; i < s.space().dimension(); ++i) {
        if (std::abs(s.space().oam_at(i)) > l_max) w += std::norm(s.amplitudes()[i]);
    }
    return w;
}

}  // namespace

CompiledBench compile(const BenchFile& bench, std::optional<int> l_max_override)
{
    const int l_max = l_max_override.value_or(bench.space ? bench.space->value.l_max : kDefaultLMax);
    const int space_line = bench.space ? bench.space->line : 0;
    if (l_max < 0) {
        throw CompileError(CompileError::Kind::domain, space_line, "space", "lmax must be non-negative");
    }

    PreparationProgram prep;
    int hologram_line = 0;
    if (bench.polarizer) prep.polarizer = bench.polarizer->value.axis;
    if (bench.hologram) {
        const auto& h = bench.hologram->value;
        hologram_line = bench.hologram->line;
        prep.oam = h.oam;
        prep.weights = h.weights.empty() ? std::vector<Complex>(h.oam.size(), 1.0) : h.weights;
        if (prep.weights.size() != prep.oam.size()) {
            throw CompileError(CompileError::Kind::domain, hologram_line, "hologram",
                               "hologram has " + std::to_string(prep.oam.size()) + " OAM values but " +
                                   std::to_string(prep.weights.size()) + " weights");
        }
        double norm = 0.0;
        for (const Complex& w : prep.weights) norm += std::norm(w);
        if (!(norm > 0.0)) throw CompileError(CompileError::Kind::domain, hologram_line, "hologram", "hologram weights are all zero");
        for (Complex& w : prep.weights) w /= std::sqrt(norm);
    }
    for (int l : prep.oam) {
        if (std::abs(l) > l_max) {
            throw CompileError(CompileError::Kind::truncation, hologram_line, "hologram",
                               "hologram prepares l=" + std::to_string(l) + " beyond lmax=" + std::to_string(l_max));
        }
    }

    for (std::size_t k = 0; k < bench.elements.size(); ++k) check_ranges(bench.elements[k], k);

    // Trace the prepared photon through the chain in a space wide enough that
    // nothing wraps, and report the first element that leaves |l| <= l_max.
    int reach = l_max;
    for (const auto& e : bench.elements) {
        if (const auto* qp = std::get_if<QPlateStmt>(&e.value)) reach += std::abs(oam_shift(qp->q));
    }
    const ModeSpace wide = make_space(std::max(reach, kMinLMax));
    PhotonState probe = prep.prepare(wide).first;
    for (std::size_t k = 0; k < bench.elements.size(); ++k) {
        const auto& e = bench.elements[k];
        probe = apply(build(wide, e.value, describe(e, k)), probe);
        if (weight_beyond(probe, l_max) > kOverflowTol) {
            throw CompileError(CompileError::Kind::truncation, e.line, describe(e, k),
                               describe(e, k) + " populates |l| > lmax=" + std::to_string(l_max) +
                                   " for the prepared input");
        }
    }

    if (l_max < kMinLMax) {
        throw CompileError(CompileError::Kind::truncation, space_line, "space",
                           "lmax=" + std::to_string(l_max) + " is below the supported minimum " +
                               std::to_string(kMinLMax));
    }

    const ModeSpace space = make_space(l_max);
    CompiledBench out{space, prep, {}, {}, bench.measure ? bench.measure->value : MeasureKind::pbs};
    for (std::size_t k = 0; k < bench.elements.size(); ++k) {
        out.chain.push_back(build(space, bench.elements[k].value, describe(bench.elements[k], k)));
        out.element_lines.push_back(bench.elements[k].line);
    }
    return out;
}

}  // namespace oamsim::dsl
