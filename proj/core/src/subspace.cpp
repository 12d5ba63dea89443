#include "nbde/subspace.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace nbde {

namespace {

void check_m_range(int m, int lo, int hi, const char* what) {
    if (m < lo || m > hi) {
        throw ArgumentError(std::string(what) + ": m = " + std::to_string(m) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

}  // namespace

GaussianBinomialTable::GaussianBinomialTable(int m) : m_(m) {
    check_m_range(m, 0, kMaxM, "GaussianBinomialTable");
    values_.resize(m + 1);
    for (int n = 0; n <= m; ++n) {
        values_[n].resize(n + 1);
        values_[n][0] = 1;
        values_[n][n] = 1;
        // Pascal recurrence in base 2: [n,k] = [n-1,k-1] + 2^k [n-1,k]
        for (int k = 1; k < n; ++k) {
            values_[n][k] = values_[n - 1][k - 1] + (BigInt(1) << k) * values_[n - 1][k];
        }
    }
}

const BigInt& GaussianBinomialTable::value(int n, int k) const {
    if (n < 0 || n > m_ || k < 0 || k > n) {
        throw ArgumentError("gaussian_binomial: need 0 <= k <= n <= " + std::to_string(m_) +
                            ", got (" + std::to_string(n) + ", " + std::to_string(k) + ")");
    }
    return values_[n][k];
}

BigInt gaussian_binomial(int n, int k) {
    if (n < 0 || n > kMaxM || k < 0 || k > n) {
        throw ArgumentError("gaussian_binomial: need 0 <= k <= n <= 16, got (" +
                            std::to_string(n) + ", " + std::to_string(k) + ")");
    }
    static const GaussianBinomialTable table(kMaxM);
    return table.value(n, k);
}

CoeffTensors::CoeffTensors(int m) : m_(m), n_(static_cast<std::size_t>(m) + 1) {
    check_m_range(m, 1, kMaxM, "CoeffTensors");
    const GaussianBinomialTable gb(m);
    const std::size_t total = n_ * n_ * n_;
    v_.assign(total, 0.0);
    c_.assign(total, 0.0);
    v_exact_.assign(total, Rational(0));
    c_exact_.assign(total, Rational(0));

    // V(i,j,k) = [i,k]_2 [m-i, j-k]_2 2^{(i-k)(j-k)} / [m,j]_2 on the feasible
    // range max(0, i+j-m) <= k <= min(i,j); the numerator counts j-dimensional
    // subspaces with a prescribed k-dimensional intersection against a fixed
    // i-dimensional subspace.
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            for (int k = std::max(0, i + j - m); k <= std::min(i, j); ++k) {
                BigInt numer = gb.value(i, k) * gb.value(m - i, j - k);
                numer <<= (i - k) * (j - k);
                Rational val(numer, gb.value(m, j));
                v_exact_[index(i, j, k)] = val;
                v_[index(i, j, k)] = to_double(val);
            }
        }
    }
    // dim(U + W) = i + j - dim(U cap W), hence C(i,j,k) = V(i,j,i+j-k).
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            for (int k = 0; k <= m; ++k) {
                const int kk = i + j - k;
                if (kk < 0 || kk > m) continue;
                c_exact_[index(i, j, k)] = v_exact_[index(i, j, kk)];
                c_[index(i, j, k)] = v_[index(i, j, kk)];
            }
        }
    }
}

CoeffTensors build_coeff_tensors(int m) { return CoeffTensors(m); }

const CoeffTensors& coeff_tensors(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const CoeffTensors>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it == cache.end()) {
        it = cache.emplace(m, std::make_unique<const CoeffTensors>(m)).first;
    }
    return *it->second;
}

namespace {

std::uint32_t span_mask(const std::vector<std::uint16_t>& rows) {
    // Grow the span one basis row at a time: new elements are old ones XOR row.
    std::uint32_t mask = 1;  // zero vector
    for (std::uint16_t row : rows) {
        std::uint32_t updated = mask;
        for (int e = 0; e < 16; ++e) {
            if (mask & (1u << e)) updated |= 1u << (e ^ row);
        }
        mask = updated;
    }
    return mask;
}

int rank_gf2(std::vector<std::uint16_t> rows) {
    int rank = 0;
    for (int col = 15; col >= 0; --col) {
        const std::uint16_t bit = static_cast<std::uint16_t>(1u << col);
        std::size_t pivot = rows.size();
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (rows[r] & bit) {
                pivot = r;
                break;
            }
        }
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != static_cast<std::size_t>(rank) && (rows[r] & bit)) rows[r] ^= rows[rank];
        }
        ++rank;
    }
    return rank;
}

/// Enumerates all k x m reduced-echelon bit matrices: choose pivot columns,
/// then fill every free position (right of the pivot, not a pivot column).
void enumerate_rref(int m, int k, std::vector<Subspace>& out) {
    if (k == 0) {
        Subspace zero;
        zero.element_mask = 1;  // just the zero vector
        out.push_back(zero);
        return;
    }
    std::vector<int> pivots(k);
    // iterate over k-combinations of {0,...,m-1} as pivot columns
    for (int i = 0; i < k; ++i) pivots[i] = i;
    while (true) {
        // free positions: (row r, col c) with c > pivots[r], c not a pivot
        std::vector<std::pair<int, int>> free_pos;
        for (int r = 0; r < k; ++r) {
            for (int c = pivots[r] + 1; c < m; ++c) {
                if (!std::binary_search(pivots.begin(), pivots.end(), c)) free_pos.emplace_back(r, c);
            }
        }
        const std::size_t nfree = free_pos.size();
        for (std::uint64_t bits = 0; bits < (1ull << nfree); ++bits) {
            Subspace s;
            s.basis.assign(k, 0);
            for (int r = 0; r < k; ++r) s.basis[r] = static_cast<std::uint16_t>(1u << pivots[r]);
            for (std::size_t f = 0; f < nfree; ++f) {
                if (bits & (1ull << f)) {
                    s.basis[free_pos[f].first] |= static_cast<std::uint16_t>(1u << free_pos[f].second);
                }
            }
            s.element_mask = span_mask(s.basis);
            out.push_back(std::move(s));
        }
        // next combination
        int i = k - 1;
        while (i >= 0 && pivots[i] == m - k + i) --i;
        if (i < 0) break;
        ++pivots[i];
        for (int j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
    }
}

}  // namespace

SubspaceSet::SubspaceSet(int m) : m_(m) {
    if (m < 1 || m > kMaxOracleM) {
        throw UnsupportedScaleError("SubspaceSet: enumeration capped at m <= 4, got m = " +
                                    std::to_string(m));
    }
    by_dim_.resize(m + 1);
    for (int k = 0; k <= m; ++k) enumerate_rref(m, k, by_dim_[k]);
}

const std::vector<Subspace>& SubspaceSet::of_dim(int k) const {
    if (k < 0 || k > m_) throw ArgumentError("SubspaceSet::of_dim: k outside [0, m]");
    return by_dim_[k];
}

std::size_t SubspaceSet::total_count() const {
    std::size_t n = 0;
    for (const auto& v : by_dim_) n += v.size();
    return n;
}

Rational oracle_coeff(int m, int i, int j, int k, CoeffKind kind) {
    if (m < 1 || m > kMaxOracleM) {
        throw UnsupportedScaleError("oracle_coeff: enumeration capped at m <= 4, got m = " +
                                    std::to_string(m));
    }
    if (i < 0 || i > m || j < 0 || j > m || k < 0 || k > m) {
        throw ArgumentError("oracle_coeff: index outside [0, m]");
    }
    const SubspaceSet all(m);
    const auto& us = all.of_dim(i);
    const auto& ws = all.of_dim(j);

    BigInt first_count = -1;
    for (const Subspace& u : us) {
        BigInt count = 0;
        for (const Subspace& w : ws) {
            int d;
            if (kind == CoeffKind::intersection) {
                const std::uint32_t inter = u.element_mask & w.element_mask;
                d = std::bit_width(static_cast<unsigned>(std::popcount(inter))) - 1;
            } else {
                std::vector<std::uint16_t> stacked = u.basis;
                stacked.insert(stacked.end(), w.basis.begin(), w.basis.end());
                d = rank_gf2(std::move(stacked));
            }
            if (d == k) ++count;
        }
        if (first_count < 0) {
            first_count = count;
        } else if (count != first_count) {
            // The fraction must not depend on which U was fixed.
            throw ConstructionError("oracle_coeff: count varies with the choice of U at (m,i,j,k) = (" +
                                    std::to_string(m) + "," + std::to_string(i) + "," +
                                    std::to_string(j) + "," + std::to_string(k) + ")");
        }
    }
    return Rational(first_count, BigInt(ws.size()));
}

double oracle_max_error(int m) {
    const CoeffTensors t = build_coeff_tensors(m);
    double worst = 0.0;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            for (int k = 0; k <= m; ++k) {
                const Rational vo = oracle_coeff(m, i, j, k, CoeffKind::intersection);
                const Rational co = oracle_coeff(m, i, j, k, CoeffKind::sum);
                worst = std::max(worst, std::abs(t.v(i, j, k) - to_double(vo)));
                worst = std::max(worst, std::abs(t.c(i, j, k) - to_double(co)));
            }
        }
    }
    return worst;
}

}  // namespace nbde
