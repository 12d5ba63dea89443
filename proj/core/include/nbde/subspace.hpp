#pragma once

/// Exact combinatorics of subspaces of GF(2)^m: Gaussian binomial coefficients,
/// the intersection/sum dimension-transition tensors used by the message-combining
/// operators, and a brute-force enumeration oracle that validates the closed forms.

#include <cstdint>
#include <vector>

#include "nbde/errors.hpp"
#include "nbde/rational.hpp"

namespace nbde {

/// Maximum field dimension supported by the exact tables.
inline constexpr int kMaxM = 16;

/// Maximum dimension for brute-force subspace enumeration (67 subspaces at m=4).
inline constexpr int kMaxOracleM = 4;

/// Table of Gaussian binomial coefficients [n choose k]_2 for 0 <= k <= n <= m:
/// the number of k-dimensional subspaces of GF(2)^n. Exact integers throughout.
class GaussianBinomialTable {
   public:
    explicit GaussianBinomialTable(int m);

    int m() const { return m_; }

    /// [n choose k]_2. Throws ArgumentError outside 0 <= k <= n <= m.
    const BigInt& value(int n, int k) const;

   private:
    int m_;
    std::vector<std::vector<BigInt>> values_;  // values_[n][k]
};

/// Convenience wrapper for a single coefficient, 0 <= k <= n <= 16.
BigInt gaussian_binomial(int n, int k);

/// The dimension-transition tensors for a fixed ambient dimension m.
///
/// V(i,j,k): probability that a uniformly random j-dimensional subspace W of
/// GF(2)^m meets a fixed i-dimensional subspace U in dim(U cap W) = k.
/// C(i,j,k): probability that dim(U + W) = k for the same experiment.
/// Both are row-stochastic over k and related by C(i,j,k) = V(i,j,i+j-k).
///
/// Entries are built with exact rational arithmetic and converted to double
/// once; the exact values stay available for symbolic work.
class CoeffTensors {
   public:
    explicit CoeffTensors(int m);

    int m() const { return m_; }

    double v(int i, int j, int k) const { return v_[index(i, j, k)]; }
    double c(int i, int j, int k) const { return c_[index(i, j, k)]; }
    const Rational& v_exact(int i, int j, int k) const { return v_exact_[index(i, j, k)]; }
    const Rational& c_exact(int i, int j, int k) const { return c_exact_[index(i, j, k)]; }

   private:
    // Layout (k, i, j) so the innermost convolution loop over j is contiguous.
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * n_ + i) * n_ + j;
    }

    int m_;
    std::size_t n_;  // m + 1
    std::vector<double> v_, c_;
    std::vector<Rational> v_exact_, c_exact_;
};

/// Builds the tensors for 1 <= m <= 16. Throws ArgumentError otherwise.
CoeffTensors build_coeff_tensors(int m);

/// Shared immutable tensor cache. Tables are built once per m (single-threaded
/// construction under a lock) and are safe for concurrent reads afterwards.
const CoeffTensors& coeff_tensors(int m);

/// One subspace of GF(2)^m in canonical form: basis rows are a reduced
/// row-echelon bit-matrix, and the element set is kept as a bitmask over
/// the 2^m field elements for O(1) intersection.
struct Subspace {
    std::vector<std::uint16_t> basis;  // RREF rows, one m-bit value per row
    std::uint32_t element_mask = 0;    // bit e set iff vector e is in the span
    int dim() const { return static_cast<int>(basis.size()); }
};

/// All subspaces of GF(2)^m grouped by dimension, enumerated via canonical
/// reduced-echelon bases (duplicate-free by construction). Limited to m <= 4.
class SubspaceSet {
   public:
    explicit SubspaceSet(int m);

    int m() const { return m_; }
    const std::vector<Subspace>& of_dim(int k) const;
    std::size_t total_count() const;

   private:
    int m_;
    std::vector<std::vector<Subspace>> by_dim_;
};

enum class CoeffKind { intersection, sum };

/// Brute-force value of V (kind=intersection) or C (kind=sum) at (i,j,k):
/// fixes an i-dimensional subspace U, enumerates all j-dimensional W and counts
/// the fraction with dim(U cap W) = k resp. dim(U + W) = k, in exact rational
/// arithmetic. The count is verified to be identical for every choice of U.
/// Throws UnsupportedScaleError for m > 4.
Rational oracle_coeff(int m, int i, int j, int k, CoeffKind kind);

/// Largest absolute difference between the closed-form tensors and the
/// enumeration oracle over all (i,j,k), after float conversion. m <= 4.
double oracle_max_error(int m);

}  // namespace nbde
