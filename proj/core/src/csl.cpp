#include "pararob/csl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lexer.hpp"
#include "pararob/error.hpp"

namespace pararob::csl {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

bool AtomicFormula::holds(std::span<const Count> state) const {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += coeffs[i] * static_cast<std::int64_t>(state[i]);
    return compare(sum, cmp, bound);
}

FormulaPtr make_true() { return std::make_shared<const Formula>(Formula{TrueFormula{}}); }

FormulaPtr make_atomic(std::vector<std::int64_t> coeffs, Comparison cmp, std::int64_t bound) {
    return std::make_shared<const Formula>(Formula{AtomicFormula{std::move(coeffs), cmp, bound}});
}

FormulaPtr make_not(FormulaPtr f) { return std::make_shared<const Formula>(Formula{NotFormula{std::move(f)}}); }

FormulaPtr make_and(FormulaPtr lhs, FormulaPtr rhs) {
    return std::make_shared<const Formula>(Formula{AndFormula{std::move(lhs), std::move(rhs)}});
}

FormulaPtr make_or(FormulaPtr lhs, FormulaPtr rhs) {
    return std::make_shared<const Formula>(Formula{OrFormula{std::move(lhs), std::move(rhs)}});
}

FormulaPtr make_prob(std::optional<Comparison> cmp, double threshold, UntilPath path) {
    if (cmp && !(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::BadThreshold, "probability threshold outside [0, 1]");
    }
    if (!(path.t1 >= 0.0 && path.t1 <= path.t2) || !std::isfinite(path.t2)) {
        throw Error(ErrorCode::BadInterval, "time bounds need 0 <= t1 <= t2");
    }
    return std::make_shared<const Formula>(Formula{ProbFormula{cmp, threshold, std::move(path)}});
}

FormulaPtr make_query(UntilPath path) { return make_prob(std::nullopt, 0.0, std::move(path)); }

// ---------------------------------------------------------------------------------------------
// Parser

namespace {

std::optional<Comparison> comparison_of(const Token& t) {
    if (t.kind != TokenKind::Punct) return std::nullopt;
    if (t.text == ">=") return Comparison::Ge;
    if (t.text == ">") return Comparison::Gt;
    if (t.text == "<=") return Comparison::Le;
    if (t.text == "<") return Comparison::Lt;
    return std::nullopt;
}

bool is_cmp_token(const Token& t) {
    return t.kind == TokenKind::Punct &&
           (t.text == ">=" || t.text == ">" || t.text == "<=" || t.text == "<" || t.text == "=");
}

class CslParser {
public:
    CslParser(std::string_view text, const ReactionNetwork& net)
        : ts_(detail::tokenize(text, /*keep_newlines=*/false)), net_(net) {}

    FormulaPtr parse() {
        auto f = parse_or();
        if (!ts_.at(TokenKind::End)) ts_.fail("unexpected " + TokenStream::describe(ts_.peek()));
        return f;
    }

private:
    FormulaPtr parse_or() {
        auto lhs = parse_and();
        while (ts_.accept_punct("|")) lhs = make_or(lhs, parse_and());
        return lhs;
    }

    FormulaPtr parse_and() {
        auto lhs = parse_unary();
        while (ts_.accept_punct("&")) lhs = make_and(lhs, parse_unary());
        return lhs;
    }

    FormulaPtr parse_unary() {
        if (ts_.accept_punct("!")) return make_not(parse_unary());
        return parse_primary();
    }

    FormulaPtr parse_primary() {
        if (ts_.accept_punct("(")) {
            auto f = parse_or();
            ts_.expect_punct(")");
            return f;
        }
        if (ts_.at_ident("true") && !net_.species_index("true")) {
            ts_.next();
            return make_true();
        }
        if (looks_like_prob()) return parse_prob();
        return parse_atom();
    }

    bool looks_like_prob() const {
        if (!ts_.at_ident("P")) return false;
        const Token& op = ts_.peek(1);
        if (op.kind == TokenKind::Punct && op.text == "=?") return true;
        if (!net_.species_index("P")) return true;
        // "P" is also a species: only "P cmp num [" is a probability operator.
        if (!is_cmp_token(op)) return false;
        std::size_t k = 2;
        if (ts_.peek(k).kind == TokenKind::Punct && ts_.peek(k).text == "-") ++k;
        return ts_.peek(k).kind == TokenKind::Number && ts_.peek(k + 1).kind == TokenKind::Punct &&
               ts_.peek(k + 1).text == "[";
    }

    FormulaPtr parse_prob() {
        ts_.next();  // P
        std::optional<Comparison> cmp;
        double threshold = 0.0;
        const Token& op = ts_.peek();
        if (ts_.accept_punct("=?")) {
            // query
        } else if (auto c = comparison_of(op)) {
            ts_.next();
            cmp = c;
            const Token& num = ts_.peek();
            threshold = ts_.expect_real();
            if (!(threshold >= 0.0 && threshold <= 1.0)) {
                TokenStream::fail_at(num, "probability threshold outside [0, 1]",
                                     ErrorCode::BadThreshold);
            }
        } else if (op.kind == TokenKind::Punct && op.text == "=") {
            ts_.fail("probability operator supports >=, >, <=, < or =? only");
        } else {
            ts_.fail("expected comparison after 'P'");
        }
        ts_.expect_punct("[");
        UntilPath path = parse_path();
        ts_.expect_punct("]");
        return make_prob(cmp, threshold, std::move(path));
    }

    UntilPath parse_path() {
        if (ts_.at_ident("F") && ts_.peek(1).kind == TokenKind::Punct && ts_.peek(1).text == "[") {
            ts_.next();
            auto [t1, t2] = parse_time_bounds();
            return UntilPath{make_true(), parse_or(), t1, t2};
        }
        auto lhs = parse_or();
        if (!ts_.at_ident("U")) ts_.fail("expected 'U[' or 'F[' in path formula");
        ts_.next();
        auto [t1, t2] = parse_time_bounds();
        return UntilPath{std::move(lhs), parse_or(), t1, t2};
    }

    std::pair<double, double> parse_time_bounds() {
        const Token& open = ts_.expect_punct("[");
        const double t1 = ts_.expect_real();
        ts_.expect_punct(",");
        const double t2 = ts_.expect_real();
        ts_.expect_punct("]");
        if (!(t1 >= 0.0 && t1 <= t2)) {
            TokenStream::fail_at(open, "time bounds need 0 <= t1 <= t2", ErrorCode::BadInterval);
        }
        return {t1, t2};
    }

    FormulaPtr parse_atom() {
        std::vector<std::int64_t> coeffs(net_.species().size(), 0);
        bool first = true;
        while (true) {
            std::int64_t sign = 1;
            if (!first) {
                if (ts_.accept_punct("+")) {
                    sign = 1;
                } else if (ts_.accept_punct("-")) {
                    sign = -1;
                } else {
                    break;
                }
            } else if (ts_.accept_punct("-")) {
                sign = -1;
            }
            std::int64_t coeff = 1;
            if (ts_.at(TokenKind::Number)) {
                coeff = static_cast<std::int64_t>(ts_.expect_uint());
                ts_.expect_punct("*");
            }
            const Token& name = ts_.expect_ident("species name or formula");
            const auto idx = net_.species_index(name.text);
            if (!idx) {
                TokenStream::fail_at(name, "unknown species '" + std::string(name.text) + "'",
                                     ErrorCode::UnknownSpecies);
            }
            coeffs[*idx] += sign * coeff;
            first = false;
        }
        const Token& op = ts_.peek();
        if (!is_cmp_token(op)) ts_.fail("expected comparison in atomic proposition");
        ts_.next();
        const std::int64_t bound = ts_.expect_int();
        if (op.text == "=") {
            return make_and(make_atomic(coeffs, Comparison::Ge, bound),
                            make_atomic(coeffs, Comparison::Le, bound));
        }
        return make_atomic(std::move(coeffs), *comparison_of(op), bound);
    }

    TokenStream ts_;
    const ReactionNetwork& net_;
};

std::string_view cmp_text(Comparison c) {
    switch (c) {
        case Comparison::Ge: return ">=";
        case Comparison::Gt: return ">";
        case Comparison::Le: return "<=";
        case Comparison::Lt: return "<";
    }
    return "?";
}

std::string time_text(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

}  // namespace

FormulaPtr parse_csl(std::string_view text, const ReactionNetwork& net) {
    return CslParser(text, net).parse();
}

FormulaPtr load_csl(const std::string& path, const ReactionNetwork& net) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open property file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csl(buf.str(), net);
}

std::string to_string(const Formula& f, const ReactionNetwork& net) {
    struct Printer {
        const ReactionNetwork& net;
        std::string operator()(const TrueFormula&) const { return "true"; }
        std::string operator()(const AtomicFormula& a) const {
            std::string out;
            for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
                const auto c = a.coeffs[i];
                if (c == 0) continue;
                if (!out.empty()) out += c < 0 ? " - " : " + ";
                else if (c < 0) out += "-";
                const auto mag = c < 0 ? -c : c;
                if (mag != 1) out += std::to_string(mag) + "*";
                out += net.species()[i].name;
            }
            if (out.empty()) out = "0*" + net.species()[0].name;
            return out + std::string(cmp_text(a.cmp)) + std::to_string(a.bound);
        }
        std::string operator()(const NotFormula& n) const { return "!(" + to_string(*n.operand, net) + ")"; }
        std::string operator()(const AndFormula& a) const {
            return "(" + to_string(*a.lhs, net) + " & " + to_string(*a.rhs, net) + ")";
        }
        std::string operator()(const OrFormula& o) const {
            return "(" + to_string(*o.lhs, net) + " | " + to_string(*o.rhs, net) + ")";
        }
        std::string operator()(const ProbFormula& p) const {
            std::string head = p.is_query() ? "P=?" : "P" + std::string(cmp_text(*p.cmp)) + time_text(p.threshold);
            return head + " [ " + to_string(*p.path.lhs, net) + " U[" + time_text(p.path.t1) + "," +
                   time_text(p.path.t2) + "] " + to_string(*p.path.rhs, net) + " ]";
        }
    };
    return std::visit(Printer{net}, f.node);
}

// ---------------------------------------------------------------------------------------------
// Checking

std::vector<StateIndex> SatBounds::lo_indices(std::size_t num_states) const {
    std::vector<StateIndex> out;
    for (std::size_t s = 0; s < num_states; ++s) {
        if (lo[s]) out.push_back(static_cast<StateIndex>(s));
    }
    return out;
}

std::vector<StateIndex> SatBounds::hi_indices(std::size_t num_states) const {
    std::vector<StateIndex> out;
    for (std::size_t s = 0; s < num_states; ++s) {
        if (hi[s]) out.push_back(static_cast<StateIndex>(s));
    }
    return out;
}

ModelChecker::ModelChecker(const IntervalGenerator& gen, CheckOptions options)
    : gen_(gen), options_(std::move(options)) {
    const std::size_t n = gen.size();
    if (options_.exit_ceiling.empty()) {
        options_.exit_ceiling.resize(n);
        for (std::size_t s = 0; s < n; ++s) options_.exit_ceiling[s] = gen.exit_rate(static_cast<StateIndex>(s)).hi;
    } else if (options_.exit_ceiling.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "exit-rate ceiling size does not match the state space");
    } else {
        for (std::size_t s = 0; s < n; ++s) {
            if (options_.exit_ceiling[s] < gen.exit_rate(static_cast<StateIndex>(s)).hi) {
                throw Error(ErrorCode::InvalidArgument, "exit-rate ceiling below the box's exit rate");
            }
        }
    }
    const StateSpace& sp = gen.space();
    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (StateIndex s = 0; s < n; ++s) {
        const auto row = sp.transitions(s);
        const auto rates = gen.rates(s);
        for (std::size_t j = 0; j < row.size(); ++j) {
            targets_.push_back(row[j].target == kSink ? static_cast<std::uint32_t>(n) : row[j].target);
            rates_.push_back(rates[j]);
        }
        offsets_.push_back(targets_.size());
    }
}

SatBounds ModelChecker::check(const Formula& f) const {
    const std::size_t n = gen_.size();
    const StateSpace& sp = gen_.space();
    return std::visit(
        [&](const auto& node) -> SatBounds {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, TrueFormula>) {
                return SatBounds{std::vector<std::uint8_t>(n + 1, 1), std::vector<std::uint8_t>(n + 1, 1)};
            } else if constexpr (std::is_same_v<T, AtomicFormula>) {
                std::vector<std::uint8_t> sat(n + 1, 0);  // SINK satisfies no atomic proposition
                for (StateIndex s = 0; s < n; ++s) sat[s] = node.holds(sp.state(s)) ? 1 : 0;
                return SatBounds{sat, sat};
            } else if constexpr (std::is_same_v<T, NotFormula>) {
                const SatBounds inner = check(*node.operand);
                SatBounds out{std::vector<std::uint8_t>(n + 1), std::vector<std::uint8_t>(n + 1)};
                for (std::size_t s = 0; s <= n; ++s) {
                    out.lo[s] = inner.hi[s] ? 0 : 1;
                    out.hi[s] = inner.lo[s] ? 0 : 1;
                }
                return out;
            } else if constexpr (std::is_same_v<T, AndFormula> || std::is_same_v<T, OrFormula>) {
                const SatBounds a = check(*node.lhs);
                const SatBounds b = check(*node.rhs);
                SatBounds out{std::vector<std::uint8_t>(n + 1), std::vector<std::uint8_t>(n + 1)};
                for (std::size_t s = 0; s <= n; ++s) {
                    if constexpr (std::is_same_v<T, AndFormula>) {
                        out.lo[s] = a.lo[s] & b.lo[s];
                        out.hi[s] = a.hi[s] & b.hi[s];
                    } else {
                        out.lo[s] = a.lo[s] | b.lo[s];
                        out.hi[s] = a.hi[s] | b.hi[s];
                    }
                }
                return out;
            } else {
                return check_prob(node);
            }
        },
        f.node);
}

namespace {

void reject_nested_query(const Formula& f) {
    std::visit(
        [](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NotFormula>) {
                reject_nested_query(*node.operand);
            } else if constexpr (std::is_same_v<T, AndFormula> || std::is_same_v<T, OrFormula>) {
                reject_nested_query(*node.lhs);
                reject_nested_query(*node.rhs);
            } else if constexpr (std::is_same_v<T, ProbFormula>) {
                if (node.is_query()) {
                    throw Error(ErrorCode::QueryNotBoolean, "P=? may only appear at the root of a property");
                }
                reject_nested_query(*node.path.lhs);
                reject_nested_query(*node.path.rhs);
            }
        },
        f.node);
}

}  // namespace

SatBounds ModelChecker::check_prob(const ProbFormula& p) const {
    if (p.is_query()) {
        throw Error(ErrorCode::QueryNotBoolean, "P=? has no truth value below the root of a property");
    }
    const SatBounds phi = check(*p.path.lhs);
    const SatBounds psi = check(*p.path.rhs);
    const auto probs = until_bounds(phi, psi, p.path.t1, p.path.t2);
    const std::size_t n = probs.size();
    SatBounds out{std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n)};
    const Comparison cmp = *p.cmp;
    for (std::size_t s = 0; s < n; ++s) {
        const Interval& iv = probs[s];
        // Every value in [lo, hi] satisfies cmp iff both endpoints do; some value does iff the
        // endpoint on the favourable side does.
        const bool upward = cmp == Comparison::Ge || cmp == Comparison::Gt;
        const double worst = upward ? iv.lo : iv.hi;
        const double best = upward ? iv.hi : iv.lo;
        out.lo[s] = compare(worst, cmp, p.threshold) ? 1 : 0;
        out.hi[s] = compare(best, cmp, p.threshold) ? 1 : 0;
    }
    return out;
}

double greedy_row_value(double self, std::span<const double> successors, std::span<const Interval> rates,
                        double lambda, bool maximize) {
    double drift = 0.0;
    for (std::size_t j = 0; j < successors.size(); ++j) {
        const double d = successors[j] - self;
        const bool favourable = maximize ? d > 0.0 : d < 0.0;
        drift += (favourable ? rates[j].hi : rates[j].lo) * d;
    }
    return self + drift / lambda;
}

std::vector<double> ModelChecker::bounded_pass(const std::vector<std::uint8_t>& evolving,
                                               std::vector<double> values, double horizon,
                                               bool maximize) const {
    const std::size_t n = gen_.size();
    double lambda = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        if (evolving[s] && offsets_[s + 1] > offsets_[s]) lambda = std::max(lambda, options_.exit_ceiling[s]);
    }
    const PoissonWindow window = fox_glynn(lambda * horizon, 0.5 * options_.delta, options_.poisson);
    if (window.right == 0) return values;
    // Iterates are averages of the initial values, so the omitted Poisson mass is worth at most
    // tail_error * max(values).
    const double vmax = *std::max_element(values.begin(), values.end());

    std::vector<double> acc(values.size(), 0.0);
    std::vector<double> next(values.size());
    const double inv_lambda = 1.0 / lambda;
    for (std::size_t i = 0;; ++i) {
        if (i >= window.left) {
            const double w = window.weights[i - window.left];
            for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += w * values[s];
        }
        if (i == window.right) break;
        for (std::size_t s = 0; s < values.size(); ++s) {
            const double vs = values[s];
            if (s == n || !evolving[s]) {
                next[s] = vs;
                continue;
            }
            double drift = 0.0;
            for (std::size_t j = offsets_[s]; j < offsets_[s + 1]; ++j) {
                const double d = values[targets_[j]] - vs;
                const bool favourable = maximize ? d > 0.0 : d < 0.0;
                drift += (favourable ? rates_[j].hi : rates_[j].lo) * d;
            }
            next[s] = std::clamp(vs + drift * inv_lambda, 0.0, 1.0);
        }
        values.swap(next);
    }
    const double slack = (maximize ? window.tail_error : -window.tail_error) * vmax;
    for (double& x : acc) x = std::clamp(x + slack, 0.0, 1.0);
    return acc;
}

std::vector<Interval> ModelChecker::until_bounds(const SatBounds& phi, const SatBounds& psi,
                                                 double t1, double t2) const {
    if (!(t1 >= 0.0 && t1 <= t2) || !std::isfinite(t2)) {
        throw Error(ErrorCode::BadInterval, "time bounds need 0 <= t1 <= t2");
    }
    const std::size_t n = gen_.size();
    if (phi.size() != n + 1 || psi.size() != n + 1) {
        throw Error(ErrorCode::InvalidArgument, "satisfaction set size does not match the state space");
    }

    auto run = [&](const std::vector<std::uint8_t>& phi_set, const std::vector<std::uint8_t>& psi_set,
                   bool maximize) {
        // Phase over [0, t2 - t1]: psi absorbing with value 1, !phi & !psi absorbing with value 0.
        std::vector<std::uint8_t> evolving(n + 1, 0);
        std::vector<double> values(n + 1, 0.0);
        for (std::size_t s = 0; s <= n; ++s) {
            values[s] = psi_set[s] ? 1.0 : 0.0;
            evolving[s] = (phi_set[s] && !psi_set[s]) ? 1 : 0;
        }
        values = bounded_pass(evolving, std::move(values), t2 - t1, maximize);
        if (t1 > 0.0) {
            // Phase over [0, t1]: the path must stay in phi; !phi states are absorbing with value 0.
            for (std::size_t s = 0; s <= n; ++s) {
                evolving[s] = phi_set[s];
                if (!phi_set[s]) values[s] = 0.0;
            }
            values = bounded_pass(evolving, std::move(values), t1, maximize);
        }
        return values;
    };

    const auto lower = run(phi.lo, psi.lo, /*maximize=*/false);
    const auto upper = run(phi.hi, psi.hi, /*maximize=*/true);
    std::vector<Interval> out(n + 1);
    for (std::size_t s = 0; s <= n; ++s) out[s] = {lower[s], std::max(lower[s], upper[s])};
    return out;
}

Interval ModelChecker::quantitative_validity(const Formula& f) const {
    const auto* prob = std::get_if<ProbFormula>(&f.node);
    if (prob == nullptr || !prob->is_query()) {
        throw Error(ErrorCode::NotQuery, "quantitative validity needs a P=? property");
    }
    reject_nested_query(*prob->path.lhs);
    reject_nested_query(*prob->path.rhs);
    const SatBounds phi = check(*prob->path.lhs);
    const SatBounds psi = check(*prob->path.rhs);
    return until_bounds(phi, psi, prob->path.t1, prob->path.t2)[0];
}

SatBounds check_formula(const IntervalGenerator& gen, const Formula& f, const CheckOptions& options) {
    reject_nested_query(f);
    return ModelChecker(gen, options).check(f);
}

std::vector<Interval> until_probability_bounds(const IntervalGenerator& gen, const SatBounds& phi,
                                               const SatBounds& psi, double t1, double t2,
                                               const CheckOptions& options) {
    return ModelChecker(gen, options).until_bounds(phi, psi, t1, t2);
}

Interval quantitative_validity(const IntervalGenerator& gen, const Formula& f,
                               const CheckOptions& options) {
    return ModelChecker(gen, options).quantitative_validity(f);
}

}  // namespace pararob::csl
