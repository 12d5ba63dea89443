#pragma once

/// Exact sparse multivariate-polynomial expansion of the density-evolution
/// update maps in CCDF coordinates, coefficient/support extraction, and the
/// combinatorial shift condition that rules out diagonal coupling matrices.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nbde/de.hpp"
#include "nbde/rational.hpp"

namespace nbde {

using Exponents = std::vector<int>;

/// Sparse multivariate polynomial over the rationals: a map from exponent
/// vectors to nonzero coefficients. Zero coefficients are never stored.
class MultiPoly {
   public:
    explicit MultiPoly(int num_vars) : num_vars_(num_vars) {}

    static MultiPoly constant(int num_vars, Rational c);
    static MultiPoly variable(int num_vars, int index);

    int num_vars() const { return num_vars_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    /// Accumulates c * x^e, erasing the term if the sum cancels.
    void add_term(const Exponents& e, const Rational& c);

    Rational coeff(const Exponents& e) const;
    int max_degree(int var) const;

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly scaled(const Rational& c) const;

    MultiPoly derivative(int var) const;

    /// Substitutes an exact value for one variable; the result keeps the same
    /// variable numbering with that variable's exponent forced to zero.
    MultiPoly substitute(int var, const Rational& value) const;

    double eval(std::span<const double> point) const;

    /// Term dump as a JSON array of {"exponents": [...], "coeff": "p/q"}.
    std::string to_json() const;

   private:
    int num_vars_;
    std::map<Exponents, Rational> terms_;
};

/// A polynomial in the state variables whose coefficients are univariate
/// polynomials in the channel parameter; stored flat with the channel
/// parameter as the trailing variable.
struct PolyInEps {
    int m = 0;           // state variables 0..m-1; eps is variable index m
    MultiPoly p{1};

    /// Exact evaluation of the channel parameter, leaving a polynomial in the
    /// state variables only.
    MultiPoly at_eps(const Rational& eps) const { return p.substitute(m, eps); }
    int eps_degree() const { return p.max_degree(m); }
};

/// Expands the check-node map components g_1..g_m as exact polynomials in the
/// CCDF variables. Guarded to m <= 4 and dc <= 16.
std::vector<MultiPoly> expand_g(const EnsembleParams& params);

/// Expands the variable-node map components f_1..f_m as exact polynomials in
/// the CCDF variables and the channel parameter. Guarded to m <= 4 and dv <= 8.
std::vector<PolyInEps> expand_f(const EnsembleParams& params);

/// Support sets per component: exponent vectors with nonzero coefficient.
/// For f the support is the union over all channel-parameter powers.
struct CoefficientSets {
    int m = 0;
    std::vector<std::set<Exponents>> f_sets;  // index j-1 for component j
    std::vector<std::set<Exponents>> g_sets;
};

CoefficientSets coefficient_sets(const std::vector<PolyInEps>& f,
                                 const std::vector<MultiPoly>& g);

/// A violation of the diagonal shift condition: exponent vector `v` lies in
/// the support of component `comp_i` but its (i -> j) shift is missing from
/// component `comp_j`.
struct DiagonalWitness {
    char side;  // 'f' or 'g'
    int comp_i = 0;
    int comp_j = 0;
    Exponents v;
};

struct DiagonalCheckResult {
    bool holds = false;
    std::optional<DiagonalWitness> witness;
};

/// Necessary support condition for a diagonal coupling matrix: for every
/// component i, every support vector v, and every component j with v_j >= 1,
/// the shifted vector v + e_i - e_j must be in component j's support.
/// Vacuously true at m = 1.
DiagonalCheckResult check_diagonal_condition(const CoefficientSets& sets);

}  // namespace nbde
