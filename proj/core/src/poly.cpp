#include "nbde/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nbde {

MultiPoly MultiPoly::constant(int num_vars, Rational c) {
    MultiPoly p(num_vars);
    if (c != 0) p.terms_.emplace(Exponents(num_vars, 0), std::move(c));
    return p;
}

MultiPoly MultiPoly::variable(int num_vars, int index) {
    MultiPoly p(num_vars);
    Exponents e(num_vars, 0);
    e[index] = 1;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational MultiPoly::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

int MultiPoly::max_degree(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    MultiPoly r(num_vars_);
    Exponents e(num_vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int v = 0; v < num_vars_; ++v) e[v] = ea[v] + eb[v];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(num_vars_);
    if (c == 0) return r;
    for (const auto& [e, coeff] : terms_) r.terms_.emplace(e, coeff * c);
    return r;
}

MultiPoly MultiPoly::derivative(int var) const {
    MultiPoly r(num_vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents de = e;
        de[var] -= 1;
        r.add_term(de, c * e[var]);
    }
    return r;
}

MultiPoly MultiPoly::substitute(int var, const Rational& value) const {
    MultiPoly r(num_vars_);
    for (const auto& [e, c] : terms_) {
        Rational scaled = c;
        for (int p = 0; p < e[var]; ++p) scaled *= value;
        if (scaled == 0) continue;
        Exponents se = e;
        se[var] = 0;
        r.add_term(se, scaled);
    }
    return r;
}

double MultiPoly::eval(std::span<const double> point) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = to_double(c);
        for (int v = 0; v < num_vars_; ++v) {
            for (int p = 0; p < e[v]; ++p) term *= point[v];
        }
        acc += term;
    }
    return acc;
}

std::string MultiPoly::to_json() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << ",";
        first = false;
        os << "{\"exponents\":[";
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (v) os << ",";
            os << e[v];
        }
        os << "],\"coeff\":\"" << c << "\"}";
    }
    os << "]";
    return os.str();
}

namespace {

// pmf components of a CCDF state as affine polynomials in the state variables
// (variables 0..m-1); extra trailing variables pass through untouched.
std::vector<MultiPoly> pmf_polys(int num_vars, int m) {
    std::vector<MultiPoly> q;
    q.reserve(m + 1);
    MultiPoly q0 = MultiPoly::constant(num_vars, Rational(1)) - MultiPoly::variable(num_vars, 0);
    q.push_back(std::move(q0));
    for (int i = 1; i < m; ++i) {
        q.push_back(MultiPoly::variable(num_vars, i - 1) - MultiPoly::variable(num_vars, i));
    }
    q.push_back(MultiPoly::variable(num_vars, m - 1));
    return q;
}

// componentwise convolution r (x) q under the given exact tensor slice
std::vector<MultiPoly> convolve_polys(const std::vector<MultiPoly>& r,
                                      const std::vector<MultiPoly>& q, const CoeffTensors& t,
                                      bool variable_side, int num_vars) {
    const int m = t.m();
    std::vector<MultiPoly> out;
    out.reserve(m + 1);
    for (int k = 0; k <= m; ++k) {
        MultiPoly acc(num_vars);
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                const Rational& coeff =
                    variable_side ? t.v_exact(i, j, k) : t.c_exact(i, j, k);
                if (coeff == 0) continue;
                acc = acc + (r[i] * q[j]).scaled(coeff);
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<MultiPoly> tail_sums(const std::vector<MultiPoly>& pmf, int num_vars, int m) {
    std::vector<MultiPoly> tails;
    tails.reserve(m);
    for (int j = 1; j <= m; ++j) {
        MultiPoly acc(num_vars);
        for (int k = j; k <= m; ++k) acc = acc + pmf[k];
        tails.push_back(std::move(acc));
    }
    return tails;
}

}  // namespace

std::vector<MultiPoly> expand_g(const EnsembleParams& params) {
    if (params.m > 4 || params.dc > 16) {
        throw UnsupportedScaleError("expand_g: guarded to m <= 4 and dc <= 16");
    }
    const int m = params.m;
    const CoeffTensors& t = coeff_tensors(m);
    const auto q = pmf_polys(m, m);
    std::vector<MultiPoly> r = q;
    for (int fold = 1; fold < params.dc - 1; ++fold) {
        r = convolve_polys(r, q, t, /*variable_side=*/false, m);
    }
    return tail_sums(r, m, m);
}

std::vector<PolyInEps> expand_f(const EnsembleParams& params) {
    if (params.m > 4 || params.dv > 8) {
        throw UnsupportedScaleError("expand_f: guarded to m <= 4 and dv <= 8");
    }
    const int m = params.m;
    const int nv = m + 1;  // state variables plus the channel parameter
    const CoeffTensors& t = coeff_tensors(m);

    const auto q = pmf_polys(nv, m);
    std::vector<MultiPoly> r = q;
    for (int fold = 1; fold < params.dv - 1; ++fold) {
        r = convolve_polys(r, q, t, /*variable_side=*/true, nv);
    }

    // channel pmf in the trailing variable: binom(m,i) eps^i (1-eps)^{m-i}
    const MultiPoly eps = MultiPoly::variable(nv, m);
    const MultiPoly one_minus_eps = MultiPoly::constant(nv, Rational(1)) - eps;
    std::vector<MultiPoly> chan;
    chan.reserve(m + 1);
    BigInt binom = 1;
    for (int i = 0; i <= m; ++i) {
        if (i > 0) binom = binom * (m - i + 1) / i;
        MultiPoly term = MultiPoly::constant(nv, Rational(binom));
        for (int p = 0; p < i; ++p) term = term * eps;
        for (int p = 0; p < m - i; ++p) term = term * one_minus_eps;
        chan.push_back(std::move(term));
    }

    const auto combined = convolve_polys(chan, r, t, /*variable_side=*/true, nv);
    auto tails = tail_sums(combined, nv, m);

    std::vector<PolyInEps> out;
    out.reserve(m);
    for (auto& tail : tails) out.push_back(PolyInEps{m, std::move(tail)});
    return out;
}

CoefficientSets coefficient_sets(const std::vector<PolyInEps>& f,
                                 const std::vector<MultiPoly>& g) {
    CoefficientSets sets;
    sets.m = static_cast<int>(g.size());
    sets.f_sets.resize(f.size());
    sets.g_sets.resize(g.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        for (const auto& [e, c] : f[j].p.terms()) {
            Exponents state_part(e.begin(), e.begin() + f[j].m);
            sets.f_sets[j].insert(std::move(state_part));
        }
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
        for (const auto& [e, c] : g[j].terms()) sets.g_sets[j].insert(e);
    }
    return sets;
}

namespace {

std::optional<DiagonalWitness> scan_side(const std::vector<std::set<Exponents>>& sets,
                                         char side) {
    const int m = static_cast<int>(sets.size());
    for (int i = 0; i < m; ++i) {
        for (const Exponents& v : sets[i]) {
            for (int j = 0; j < m; ++j) {
                if (j == i || v[j] < 1) continue;
                Exponents shifted = v;
                shifted[i] += 1;
                shifted[j] -= 1;
                if (!sets[j].count(shifted)) {
                    return DiagonalWitness{side, i + 1, j + 1, v};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

DiagonalCheckResult check_diagonal_condition(const CoefficientSets& sets) {
    DiagonalCheckResult res;
    if (auto w = scan_side(sets.f_sets, 'f')) {
        res.holds = false;
        res.witness = std::move(w);
        return res;
    }
    if (auto w = scan_side(sets.g_sets, 'g')) {
        res.holds = false;
        res.witness = std::move(w);
        return res;
    }
    res.holds = true;
    return res;
}

}  // namespace nbde
