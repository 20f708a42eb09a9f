#include "pararob/model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lexer.hpp"
#include "pararob/error.hpp"

namespace pararob {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

ParamBox::ParamBox(std::vector<Interval> dims) : dims_(std::move(dims)) {
    for (const auto& d : dims_) {
        if (!(d.lo <= d.hi)) throw Error(ErrorCode::Bounds, "parameter box has lo > hi");
    }
}

bool ParamBox::contains(const ParamBox& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!dims_[i].contains(other.dims_[i])) return false;
    }
    return true;
}

bool ParamBox::contains_point(std::span<const double> point) const {
    if (point.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!dims_[i].contains(point[i])) return false;
    }
    return true;
}

bool ParamBox::is_point() const {
    return std::all_of(dims_.begin(), dims_.end(), [](const Interval& d) { return d.is_point(); });
}

std::vector<double> ParamBox::lower_corner() const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& d : dims_) out.push_back(d.lo);
    return out;
}

std::vector<double> ParamBox::upper_corner() const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& d : dims_) out.push_back(d.hi);
    return out;
}

ParamBox ParamBox::with(std::size_t dim, Interval value) const {
    auto dims = dims_;
    dims.at(dim) = value;
    return ParamBox(std::move(dims));
}

ReactionNetwork::ReactionNetwork(std::vector<Species> species, std::vector<Parameter> params,
                                 std::vector<Reaction> reactions)
    : species_(std::move(species)), params_(std::move(params)), reactions_(std::move(reactions)) {
    if (species_.empty()) throw Error(ErrorCode::Syntax, "model declares no species");
    if (reactions_.empty()) throw Error(ErrorCode::Syntax, "model declares no reactions");
    for (const auto& s : species_) {
        if (s.max == 0) throw Error(ErrorCode::Bounds, "species '" + s.name + "' has max 0");
        if (s.init > s.max) {
            throw Error(ErrorCode::Bounds, "species '" + s.name + "' has init > max");
        }
    }
    for (const auto& p : params_) {
        if (!(p.range.lo >= 0.0) || !(p.range.lo <= p.range.hi)) {
            throw Error(ErrorCode::Bounds, "parameter '" + p.name + "' needs 0 <= lo <= hi");
        }
    }
    for (const auto& r : reactions_) {
        if (r.param >= params_.size()) {
            throw Error(ErrorCode::UnknownParam, "reaction '" + r.name + "' has no rate parameter");
        }
        if (r.reactants.size() != species_.size() || r.products.size() != species_.size()) {
            throw Error(ErrorCode::Syntax, "reaction '" + r.name + "' stoichiometry size mismatch");
        }
        if (!(r.rate_scale > 0.0)) {
            throw Error(ErrorCode::Bounds, "reaction '" + r.name + "' needs a positive rate scale");
        }
        if (r.reactants == r.products) {
            throw Error(ErrorCode::Bounds, "reaction '" + r.name + "' does not change the state");
        }
    }
}

std::optional<std::size_t> ReactionNetwork::species_index(std::string_view name) const {
    for (std::size_t i = 0; i < species_.size(); ++i) {
        if (species_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> ReactionNetwork::param_index(std::string_view name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) return i;
    }
    return std::nullopt;
}

ParamBox ReactionNetwork::declared_box() const {
    std::vector<Interval> dims;
    dims.reserve(params_.size());
    for (const auto& p : params_) dims.push_back(p.range);
    return ParamBox(std::move(dims));
}

namespace {

struct PendingTerm {
    Count coeff;
    Token species;
};

struct PendingReaction {
    Token name;
    std::vector<PendingTerm> lhs;
    std::vector<PendingTerm> rhs;
    double scale;
    Token param;
};

std::vector<PendingTerm> parse_side(TokenStream& ts) {
    std::vector<PendingTerm> terms;
    if (ts.at(TokenKind::Number) && ts.peek().text == "0" && ts.peek(1).kind != TokenKind::Ident) {
        ts.next();
        return terms;
    }
    do {
        Count coeff = 1;
        if (ts.at(TokenKind::Number)) {
            const Token& t = ts.peek();
            const auto v = ts.expect_uint();
            if (v == 0 || v > 1000000) TokenStream::fail_at(t, "stoichiometric coefficient out of range");
            coeff = static_cast<Count>(v);
        }
        const Token& sp = ts.expect_ident("species name");
        terms.push_back({coeff, sp});
    } while (ts.accept_punct("+"));
    return terms;
}

void end_of_line(TokenStream& ts) {
    if (ts.at(TokenKind::End)) return;
    if (!ts.at(TokenKind::Newline)) ts.fail("unexpected " + TokenStream::describe(ts.peek()));
    ts.next();
}

}  // namespace

ReactionNetwork parse_model(std::string_view text) {
    TokenStream ts(detail::tokenize(text, /*keep_newlines=*/true));

    std::vector<Species> species;
    std::vector<Parameter> params;
    std::vector<PendingReaction> pending;
    std::unordered_set<std::string> names;

    auto claim_name = [&](const Token& t) {
        if (!names.insert(std::string(t.text)).second) {
            TokenStream::fail_at(t, "duplicate name '" + std::string(t.text) + "'");
        }
    };

    while (!ts.at(TokenKind::End)) {
        if (ts.at(TokenKind::Newline)) {
            ts.next();
            continue;
        }
        const Token& kw = ts.expect_ident("'species', 'param' or 'reaction'");
        if (kw.text == "species") {
            const Token& name = ts.expect_ident("species name");
            claim_name(name);
            ts.expect_keyword("init");
            const Token& init_tok = ts.peek();
            const auto init = ts.expect_uint();
            ts.expect_keyword("max");
            const Token& max_tok = ts.peek();
            const auto max = ts.expect_uint();
            if (max == 0 || max > UINT32_MAX) {
                TokenStream::fail_at(max_tok, "species max must be a positive 32-bit count",
                                     ErrorCode::Bounds);
            }
            if (init > max) {
                TokenStream::fail_at(init_tok, "init exceeds max for species '" +
                                                   std::string(name.text) + "'",
                                     ErrorCode::Bounds);
            }
            species.push_back({std::string(name.text), static_cast<Count>(init), static_cast<Count>(max)});
        } else if (kw.text == "param") {
            const Token& name = ts.expect_ident("parameter name");
            claim_name(name);
            Interval range;
            const Token& at = ts.peek();
            if (ts.accept_punct("=")) {
                const double v = ts.expect_real();
                range = {v, v};
            } else if (ts.at_ident("in")) {
                ts.next();
                ts.expect_punct("[");
                range.lo = ts.expect_real();
                ts.expect_punct(",");
                range.hi = ts.expect_real();
                ts.expect_punct("]");
            } else {
                ts.fail("expected '=' or 'in' after parameter name");
            }
            if (!(range.lo >= 0.0) || !(range.lo <= range.hi)) {
                TokenStream::fail_at(at, "parameter '" + std::string(name.text) +
                                             "' needs 0 <= lo <= hi",
                                     ErrorCode::Bounds);
            }
            params.push_back({std::string(name.text), range});
        } else if (kw.text == "reaction") {
            PendingReaction r;
            r.name = ts.expect_ident("reaction name");
            claim_name(r.name);
            ts.expect_punct(":");
            r.lhs = parse_side(ts);
            ts.expect_punct("->");
            r.rhs = parse_side(ts);
            ts.expect_punct("@");
            const Token& scale_tok = ts.peek();
            r.scale = ts.expect_real();
            if (!(r.scale > 0.0)) {
                TokenStream::fail_at(scale_tok, "rate scale must be positive", ErrorCode::Bounds);
            }
            ts.expect_punct("*");
            r.param = ts.expect_ident("parameter name");
            pending.push_back(std::move(r));
        } else {
            TokenStream::fail_at(kw, "unknown declaration '" + std::string(kw.text) + "'");
        }
        end_of_line(ts);
    }

    if (species.empty()) ts.fail("model declares no species");
    if (pending.empty()) ts.fail("model declares no reactions");

    auto find_species = [&](const Token& t) -> std::size_t {
        for (std::size_t i = 0; i < species.size(); ++i) {
            if (species[i].name == t.text) return i;
        }
        TokenStream::fail_at(t, "unknown species '" + std::string(t.text) + "'",
                             ErrorCode::UnknownSpecies);
    };

    std::vector<Reaction> reactions;
    reactions.reserve(pending.size());
    for (const auto& p : pending) {
        Reaction r;
        r.name = std::string(p.name.text);
        r.reactants.assign(species.size(), 0);
        r.products.assign(species.size(), 0);
        for (const auto& t : p.lhs) r.reactants[find_species(t.species)] += t.coeff;
        for (const auto& t : p.rhs) r.products[find_species(t.species)] += t.coeff;
        const auto it = std::find_if(params.begin(), params.end(),
                                     [&](const Parameter& q) { return q.name == p.param.text; });
        if (it == params.end()) {
            TokenStream::fail_at(p.param, "undeclared parameter '" + std::string(p.param.text) + "'",
                                 ErrorCode::UnknownParam);
        }
        r.param = static_cast<std::size_t>(it - params.begin());
        r.rate_scale = p.scale;
        if (r.reactants == r.products) {
            TokenStream::fail_at(p.name, "reaction '" + r.name + "' does not change the state",
                                 ErrorCode::Bounds);
        }
        reactions.push_back(std::move(r));
    }

    return ReactionNetwork(std::move(species), std::move(params), std::move(reactions));
}

ReactionNetwork load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void print_side(std::ostringstream& os, const ReactionNetwork& net, const std::vector<Count>& side) {
    bool first = true;
    for (std::size_t i = 0; i < side.size(); ++i) {
        if (side[i] == 0) continue;
        if (!first) os << " + ";
        if (side[i] != 1) os << side[i] << ' ';
        os << net.species()[i].name;
        first = false;
    }
    if (first) os << '0';
}

}  // namespace

std::string print_model(const ReactionNetwork& net) {
    std::ostringstream os;
    for (const auto& s : net.species()) {
        os << "species " << s.name << " init " << s.init << " max " << s.max << '\n';
    }
    for (const auto& p : net.params()) {
        os << "param " << p.name;
        if (p.range.is_point()) {
            os << " = " << format_real(p.range.lo) << '\n';
        } else {
            os << " in [" << format_real(p.range.lo) << ", " << format_real(p.range.hi) << "]\n";
        }
    }
    for (const auto& r : net.reactions()) {
        os << "reaction " << r.name << ": ";
        print_side(os, net, r.reactants);
        os << " -> ";
        print_side(os, net, r.products);
        os << " @ " << format_real(r.rate_scale) << " * " << net.params()[r.param].name << '\n';
    }
    return os.str();
}

double combinations(std::span<const Count> state, std::span<const Count> reactants) {
    double h = 1.0;
    for (std::size_t i = 0; i < reactants.size(); ++i) {
        const Count nu = reactants[i];
        const Count x = state[i];
        if (x < nu) return 0.0;
        // C(x, j+1) = C(x, j) * (x - j) / (j + 1); every partial product is an integer.
        double c = 1.0;
        for (Count j = 0; j < nu; ++j) {
            c = c * static_cast<double>(x - j) / static_cast<double>(j + 1);
        }
        h *= c;
    }
    return h;
}

double propensity(std::span<const Count> state, const Reaction& r, double k) {
    const double h = combinations(state, r.reactants);
    if (h == 0.0) return 0.0;
    return k * r.rate_scale * h;
}

Interval propensity_bounds(std::span<const Count> state, const Reaction& r, const ParamBox& box) {
    const Interval& k = box[r.param];
    return {propensity(state, r, k.lo), propensity(state, r, k.hi)};
}

}  // namespace pararob
