// Copyright 2026 The qcontext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcontext/error.hpp"
#include "qcontext/zmod.hpp"

namespace qcontext {

/// Sparse multivariate polynomial over Z_d.
///
/// Terms are keyed by exponent tuples of length `num_vars()`. Zero
/// coefficients are never stored, so structural equality is polynomial
/// equality. Exponents are kept as written (x^d is not folded to x);
/// call `fermat_reduced()` when the function on Z_d^n is what matters.
class ZdPoly {
   public:
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, Residue>;

    ZdPoly(Modulus m, std::size_t num_vars) : m_(m), num_vars_(num_vars) {
        if (num_vars == 0) {
            throw Error(ErrorKind::ArityMismatch, "polynomials need at least one variable");
        }
    }

    static ZdPoly constant(Modulus m, std::size_t num_vars, std::int64_t c) {
        ZdPoly p(m, num_vars);
        p.add_term(Exponents(num_vars, 0), c);
        return p;
    }

    static ZdPoly variable(Modulus m, std::size_t num_vars, std::size_t index) {
        if (index >= num_vars) {
            throw Error(ErrorKind::ArityMismatch, "variable index out of range");
        }
        Exponents e(num_vars, 0);
        e[index] = 1;
        ZdPoly p(m, num_vars);
        p.add_term(e, 1);
        return p;
    }

    static ZdPoly monomial(Modulus m, Exponents exponents, std::int64_t c) {
        ZdPoly p(m, exponents.size());
        p.add_term(exponents, c);
        return p;
    }

    const Modulus &modulus() const noexcept {
        return m_;
    }
    std::size_t num_vars() const noexcept {
        return num_vars_;
    }
    const TermMap &terms() const noexcept {
        return terms_;
    }
    bool is_zero() const noexcept {
        return terms_.empty();
    }

    Residue coefficient(const Exponents &e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0 : it->second;
    }

    /// Adds c * x^e to the polynomial.
    void add_term(const Exponents &e, std::int64_t c) {
        if (e.size() != num_vars_) {
            throw Error(ErrorKind::ArityMismatch, "exponent tuple has wrong length");
        }
        Residue r = m_.reduce(c);
        if (r == 0) {
            return;
        }
        auto [it, inserted] = terms_.emplace(e, r);
        if (!inserted) {
            it->second = m_.add(it->second, r);
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    static unsigned degree_of(const Exponents &e) {
        unsigned total = 0;
        for (unsigned x : e) {
            total += x;
        }
        return total;
    }

    /// Total degree; -1 for the zero polynomial.
    int total_degree() const {
        int best = -1;
        for (const auto &[e, c] : terms_) {
            best = std::max(best, static_cast<int>(degree_of(e)));
        }
        return best;
    }

    Residue eval(std::span<const Residue> point) const {
        if (point.size() != num_vars_) {
            throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(num_vars_) +
                                                      " coordinates, got " + std::to_string(point.size()));
        }
        const std::int64_t d = m_.value();
        std::int64_t acc = 0;
        for (const auto &[e, c] : terms_) {
            std::int64_t t = c;
            for (std::size_t i = 0; i < num_vars_; ++i) {
                Residue base = m_.reduce(point[i]);
                for (unsigned k = 0; k < e[i]; ++k) {
                    t = t * base % d;
                }
            }
            acc += t;
        }
        return m_.reduce(acc);
    }

    Residue eval(std::initializer_list<Residue> point) const {
        return eval(std::span<const Residue>(point.begin(), point.size()));
    }

    ZdPoly operator-() const {
        ZdPoly r(m_, num_vars_);
        for (const auto &[e, c] : terms_) {
            r.terms_.emplace(e, m_.neg(c));
        }
        return r;
    }

    ZdPoly &operator+=(const ZdPoly &o) {
        check_compatible(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    ZdPoly &operator-=(const ZdPoly &o) {
        check_compatible(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, m_.neg(c));
        }
        return *this;
    }
    friend ZdPoly operator+(ZdPoly a, const ZdPoly &b) {
        a += b;
        return a;
    }
    friend ZdPoly operator-(ZdPoly a, const ZdPoly &b) {
        a -= b;
        return a;
    }

    friend ZdPoly operator*(const ZdPoly &a, const ZdPoly &b) {
        a.check_compatible(b);
        ZdPoly r(a.m_, a.num_vars_);
        Exponents e(a.num_vars_);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < a.num_vars_; ++i) {
                    e[i] = ea[i] + eb[i];
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend ZdPoly operator*(std::int64_t s, const ZdPoly &p) {
        ZdPoly r(p.m_, p.num_vars_);
        for (const auto &[e, c] : p.terms_) {
            r.add_term(e, p.m_.mul(p.m_.reduce(s), c));
        }
        return r;
    }

    ZdPoly pow(unsigned exponent) const {
        ZdPoly result = constant(m_, num_vars_, 1);
        for (unsigned i = 0; i < exponent; ++i) {
            result = result * *this;
        }
        return result;
    }

    /// Replaces variable i by images[i]. All images must share a variable
    /// count, which becomes the variable count of the result.
    ZdPoly substitute(std::span<const ZdPoly> images) const {
        if (images.size() != num_vars_) {
            throw Error(ErrorKind::ArityMismatch, "substitution needs one image per variable");
        }
        const std::size_t out_vars = images.front().num_vars();
        std::vector<std::vector<ZdPoly>> powers(num_vars_);
        ZdPoly result(m_, out_vars);
        for (const auto &[e, c] : terms_) {
            ZdPoly term = constant(m_, out_vars, c);
            for (std::size_t i = 0; i < num_vars_; ++i) {
                if (e[i] == 0) {
                    continue;
                }
                auto &cache = powers[i];
                if (cache.empty()) {
                    if (images[i].num_vars() != out_vars || !(images[i].m_ == m_)) {
                        throw Error(ErrorKind::ArityMismatch, "substitution images disagree");
                    }
                    cache.push_back(constant(m_, out_vars, 1));
                }
                while (cache.size() <= e[i]) {
                    cache.push_back(cache.back() * images[i]);
                }
                term = term * cache[e[i]];
            }
            result += term;
        }
        return result;
    }

    /// Reorders variables: variable i of the result is variable order[i] of *this.
    ZdPoly permute_vars(std::span<const std::size_t> order) const {
        if (order.size() != num_vars_) {
            throw Error(ErrorKind::ArityMismatch, "permutation has wrong length");
        }
        ZdPoly r(m_, num_vars_);
        Exponents out(num_vars_);
        for (const auto &[e, c] : terms_) {
            for (std::size_t i = 0; i < num_vars_; ++i) {
                out[i] = e[order[i]];
            }
            r.add_term(out, c);
        }
        return r;
    }

    /// Folds every exponent using x^d = x, giving the unique representative
    /// with per-variable exponents below d.
    ZdPoly fermat_reduced() const {
        const unsigned d = static_cast<unsigned>(m_.value());
        ZdPoly r(m_, num_vars_);
        Exponents out(num_vars_);
        for (const auto &[e, c] : terms_) {
            for (std::size_t i = 0; i < num_vars_; ++i) {
                out[i] = e[i] == 0 ? 0 : (e[i] - 1) % (d - 1) + 1;
            }
            r.add_term(out, c);
        }
        return r;
    }

    /// Terms of total degree within [lo, hi].
    ZdPoly degree_band(unsigned lo, unsigned hi) const {
        ZdPoly r(m_, num_vars_);
        for (const auto &[e, c] : terms_) {
            unsigned deg = degree_of(e);
            if (deg >= lo && deg <= hi) {
                r.terms_.emplace(e, c);
            }
        }
        return r;
    }

    /// True when *this - other has no non-constant term.
    bool differs_by_constant(const ZdPoly &other) const {
        ZdPoly diff = *this - other;
        return diff.total_degree() <= 0;
    }

    friend bool operator==(const ZdPoly &a, const ZdPoly &b) {
        return a.m_ == b.m_ && a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
    }

   private:
    void check_compatible(const ZdPoly &o) const {
        if (!(o.m_ == m_) || o.num_vars_ != num_vars_) {
            throw Error(ErrorKind::ArityMismatch, "polynomials over different rings");
        }
    }

    Modulus m_;
    std::size_t num_vars_;
    TermMap terms_;
};

/// Conventional variable names: x for one variable, (j,k) for two,
/// x0..x{n-1} otherwise.
inline std::vector<std::string> default_var_names(std::size_t num_vars) {
    if (num_vars == 1) {
        return {"x"};
    }
    if (num_vars == 2) {
        return {"j", "k"};
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < num_vars; ++i) {
        names.push_back("x" + std::to_string(i));
    }
    return names;
}

/// Canonical text: terms by descending total degree, then descending
/// exponent tuple; coefficients in [1, d); "0" for the zero polynomial.
/// Example: "2*j^2*k + 4*j*k^2 + 1".
inline std::string to_string(const ZdPoly &p, const std::vector<std::string> &names) {
    if (names.size() != p.num_vars()) {
        throw Error(ErrorKind::ArityMismatch, "wrong number of variable names");
    }
    if (p.is_zero()) {
        return "0";
    }
    std::vector<std::pair<ZdPoly::Exponents, Residue>> terms(p.terms().begin(), p.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) {
        unsigned da = ZdPoly::degree_of(a.first);
        unsigned db = ZdPoly::degree_of(b.first);
        if (da != db) {
            return da > db;
        }
        return a.first > b.first;
    });
    std::string out;
    for (const auto &[e, c] : terms) {
        if (!out.empty()) {
            out += " + ";
        }
        std::string factors;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            if (!factors.empty()) {
                factors += "*";
            }
            factors += names[i];
            if (e[i] > 1) {
                factors += "^" + std::to_string(e[i]);
            }
        }
        if (factors.empty()) {
            out += std::to_string(c);
        } else if (c == 1) {
            out += factors;
        } else {
            out += std::to_string(c) + "*" + factors;
        }
    }
    return out;
}

inline std::string to_string(const ZdPoly &p) {
    return to_string(p, default_var_names(p.num_vars()));
}

namespace detail {

// Recursive-descent parser for
//   expr    := ['+'|'-'] term { ('+'|'-') term }
//   term    := power { '*' power }
//   power   := primary [ '^' integer ]
//   primary := integer | name | '(' expr ')'
class PolyParser {
   public:
    PolyParser(std::string_view text, Modulus m, const std::vector<std::string> &names)
        : text_(text), m_(m), names_(names) {
    }

    ZdPoly parse() {
        ZdPoly p = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return p;
    }

   private:
    [[noreturn]] void fail(const std::string &why) const {
        throw Error(ErrorKind::ParseError, why + " at offset " + std::to_string(pos_) + " in \"" +
                                               std::string(text_) + "\"");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::int64_t integer() {
        skip_space();
        std::size_t start = pos_;
        std::int64_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            if (v > (std::int64_t{1} << 40)) {
                fail("integer literal too large");
            }
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        if (start == pos_) {
            fail("expected integer");
        }
        return v;
    }

    ZdPoly expr() {
        ZdPoly acc(m_, names_.size());
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        ZdPoly first = term();
        acc = negate ? -first : first;
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    ZdPoly term() {
        ZdPoly acc = power();
        while (accept('*')) {
            acc = acc * power();
        }
        return acc;
    }

    ZdPoly power() {
        ZdPoly base = primary();
        if (accept('^')) {
            std::int64_t e = integer();
            if (e > 64) {
                fail("exponent too large");
            }
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    ZdPoly primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ZdPoly inner = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return ZdPoly::constant(m_, names_.size(), m_.reduce(integer()));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            std::string_view name = text_.substr(start, pos_ - start);
            for (std::size_t i = 0; i < names_.size(); ++i) {
                if (names_[i] == name) {
                    return ZdPoly::variable(m_, names_.size(), i);
                }
            }
            pos_ = start;
            fail("unknown variable '" + std::string(name) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Modulus m_;
    const std::vector<std::string> &names_;
};

}  // namespace detail

inline ZdPoly parse_poly(std::string_view text, Modulus m, const std::vector<std::string> &names) {
    if (names.empty()) {
        throw Error(ErrorKind::ArityMismatch, "at least one variable name is required");
    }
    return detail::PolyParser(text, m, names).parse();
}

/// Parses a two-variable polynomial written in either (j,k) or (x,y).
inline ZdPoly parse_poly2(std::string_view text, Modulus m) {
    bool uses_xy = text.find_first_of("xy") != std::string_view::npos;
    return parse_poly(text, m, uses_xy ? std::vector<std::string>{"x", "y"} : default_var_names(2));
}

/// Exhaustive test: every value of Z_d is taken exactly d^{n-1} times on Z_d^n.
inline bool is_permutation_polynomial(const ZdPoly &p) {
    const std::int64_t d = p.modulus().value();
    const std::size_t n = p.num_vars();
    std::int64_t points = 1;
    for (std::size_t i = 0; i < n; ++i) {
        points *= d;
        if (points > (std::int64_t{1} << 26)) {
            throw Error(ErrorKind::ScaleError, "exhaustive permutation test too large");
        }
    }
    const std::int64_t fibre = points / d;
    std::vector<std::int64_t> histogram(static_cast<std::size_t>(d), 0);
    std::vector<Residue> point(n, 0);
    for (std::int64_t idx = 0; idx < points; ++idx) {
        if (++histogram[static_cast<std::size_t>(p.eval(point))] > fibre) {
            return false;
        }
        for (std::size_t i = n; i-- > 0;) {
            if (++point[i] < d) {
                break;
            }
            point[i] = 0;
        }
    }
    return true;
}

enum class DicksonShape { Linear, Cubic };

/// f(x) = a * g(x + b) + c with g(x) = x or x^3.
struct DicksonForm {
    Residue a = 0;
    DicksonShape g = DicksonShape::Linear;
    Residue b = 0;
    Residue c = 0;
};

struct DicksonResult {
    bool is_permutation = false;
    std::optional<DicksonForm> normal_form;
};

inline std::string to_string(const DicksonForm &f) {
    std::string g = f.g == DicksonShape::Linear ? "(x + " + std::to_string(f.b) + ")"
                                                : "(x + " + std::to_string(f.b) + ")^3";
    return std::to_string(f.a) + "*" + g + " + " + std::to_string(f.c);
}

/// Decides whether a one-variable polynomial of degree <= 3 permutes Z_d by
/// matching it against the normal forms a*(x+b) + c and a*(x+b)^3 + c.
/// Requires d != 1 (mod 3), where those are the only permutation shapes.
inline DicksonResult dickson_classify(const ZdPoly &p) {
    const Modulus &m = p.modulus();
    const std::int64_t d = m.value();
    if (p.num_vars() != 1) {
        throw Error(ErrorKind::ArityMismatch, "Dickson classification is for one-variable polynomials");
    }
    if (d % 3 == 1) {
        throw Error(ErrorKind::UnsupportedModulus,
                    "d = " + std::to_string(d) + " is 1 mod 3; x^3 does not permute Z_d");
    }
    // Over Z_3, x^3 and x agree as functions, so fold before reading the degree.
    ZdPoly f = d == 3 ? p.fermat_reduced() : p;
    if (f.total_degree() > 3) {
        throw Error(ErrorKind::Unsupported, "Dickson classification needs degree <= 3");
    }
    auto coef = [&](unsigned e) { return f.coefficient({e}); };
    Residue a3 = coef(3), a2 = coef(2), a1 = coef(1), a0 = coef(0);
    DicksonResult result;
    if (a3 == 0) {
        // Odd d: quadratics are two-to-one, constants are not injective.
        if (a2 == 0 && a1 != 0) {
            result.is_permutation = true;
            result.normal_form = DicksonForm{a1, DicksonShape::Linear, 0, a0};
        }
        return result;
    }
    // a3*(x+b)^3 + c = a3 x^3 + 3 a3 b x^2 + 3 a3 b^2 x + (a3 b^3 + c).
    Residue b = m.mul(a2, m.inv(m.mul(3, a3)));
    if (m.mul(m.mul(3, a3), m.mul(b, b)) != a1) {
        return result;
    }
    Residue c = m.sub(a0, m.mul(a3, m.pow(b, 3)));
    result.is_permutation = true;
    result.normal_form = DicksonForm{a3, DicksonShape::Cubic, b, c};
    return result;
}

}  // namespace qcontext
