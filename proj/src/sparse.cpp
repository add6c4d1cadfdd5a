#include "cf/sparse.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cf {

Elimination::Elimination(int rows, int cols, std::vector<SparseVec> A) : rows_(rows), cols_(cols) {
    if (static_cast<int>(A.size()) != rows) throw std::invalid_argument("row count mismatch");
    std::vector<std::set<int>> col_rows(cols);
    std::set<std::pair<int, int>> active;
    for (int r = 0; r < rows; ++r) {
        for (auto it = A[r].begin(); it != A[r].end();) {
            if (it->first < 0 || it->first >= cols) throw std::invalid_argument("column out of range");
            if (sgn(it->second) == 0) {
                it = A[r].erase(it);
                continue;
            }
            col_rows[it->first].insert(r);
            ++it;
        }
        if (A[r].empty())
            zero_rows_.push_back(r);
        else
            active.insert({static_cast<int>(A[r].size()), r});
    }
    std::vector<bool> pivoted_col(cols, false);
    while (!active.empty()) {
        int r = active.begin()->second;
        active.erase(active.begin());
        SparseVec& row = A[r];
        int c = -1;
        size_t best = 0;
        for (const auto& [j, v] : row) {
            size_t n = col_rows[j].size();
            if (c < 0 || n < best) {
                c = j;
                best = n;
            }
        }
        for (const auto& [j, v] : row) col_rows[j].erase(r);
        Step st;
        st.row = r;
        st.col = c;
        const Q p = row.at(c);
        std::vector<int> targets(col_rows[c].begin(), col_rows[c].end());
        for (int i : targets) {
            SparseVec& ri = A[i];
            Q f = ri.at(c) / p;
            active.erase({static_cast<int>(ri.size()), i});
            for (const auto& [j, v] : row) {
                auto it = ri.find(j);
                if (it == ri.end()) {
                    ri.emplace(j, -f * v);
                    col_rows[j].insert(i);
                } else {
                    it->second -= f * v;
                    if (sgn(it->second) == 0) {
                        ri.erase(it);
                        col_rows[j].erase(i);
                    }
                }
            }
            if (ri.empty())
                zero_rows_.push_back(i);
            else
                active.insert({static_cast<int>(ri.size()), i});
            st.ops.push_back({i, f});
        }
        pivoted_col[c] = true;
        st.urow = std::move(row);
        row.clear();
        steps_.push_back(std::move(st));
    }
    std::sort(zero_rows_.begin(), zero_rows_.end());
    for (int j = 0; j < cols; ++j)
        if (!pivoted_col[j]) free_cols_.push_back(j);
}

SparseVec Elimination::reduce(SparseVec b) const {
    for (const auto& st : steps_) {
        auto it = b.find(st.row);
        if (it == b.end()) continue;
        const Q br = it->second;
        for (const auto& [i, f] : st.ops) {
            auto jt = b.find(i);
            if (jt == b.end())
                b.emplace(i, -f * br);
            else {
                jt->second -= f * br;
                if (sgn(jt->second) == 0) b.erase(jt);
            }
        }
    }
    return b;
}

std::map<int, Q> Elimination::obstruction(const SparseVec& b) const {
    SparseVec red = reduce(b);
    std::map<int, Q> out;
    for (int r : zero_rows_) {
        auto it = red.find(r);
        out[r] = (it == red.end()) ? Q(0) : it->second;
    }
    return out;
}

SparseVec Elimination::left_null(int row) const {
    SparseVec y{{row, Q(1)}};
    for (auto st = steps_.rbegin(); st != steps_.rend(); ++st) {
        Q acc = 0;
        for (const auto& [i, f] : st->ops) {
            auto it = y.find(i);
            if (it != y.end()) acc += f * it->second;
        }
        if (sgn(acc) == 0) continue;
        auto it = y.find(st->row);
        if (it == y.end())
            y.emplace(st->row, -acc);
        else {
            it->second -= acc;
            if (sgn(it->second) == 0) y.erase(it);
        }
    }
    return y;
}

SparseVec Elimination::back_substitute(const SparseVec& red, const SparseVec& free_values) const {
    SparseVec x = free_values;
    for (auto st = steps_.rbegin(); st != steps_.rend(); ++st) {
        auto it = red.find(st->row);
        Q acc = (it == red.end()) ? Q(0) : it->second;
        for (const auto& [j, v] : st->urow) {
            if (j == st->col) continue;
            auto xt = x.find(j);
            if (xt != x.end()) acc -= v * xt->second;
        }
        if (sgn(acc) != 0) x[st->col] = acc / st->urow.at(st->col);
    }
    return x;
}

std::optional<SparseVec> Elimination::solve(const SparseVec& b) const {
    SparseVec red = reduce(b);
    for (int r : zero_rows_)
        if (red.count(r)) return std::nullopt;
    return back_substitute(red, {});
}

SparseVec Elimination::null_vector(int free_col) const {
    return back_substitute({}, {{free_col, Q(1)}});
}

DenseQ dense_zero(int r, int c) { return DenseQ(r, std::vector<Q>(c, Q(0))); }

DenseQ dense_identity(int n) {
    DenseQ a = dense_zero(n, n);
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

DenseQ dense_mul(const DenseQ& a, const DenseQ& b) {
    if (a.empty()) return {};
    int n = static_cast<int>(a.size()), m = static_cast<int>(b.size()), k = b.empty() ? 0 : static_cast<int>(b[0].size());
    if (static_cast<int>(a[0].size()) != m) throw std::invalid_argument("dense_mul shape");
    DenseQ c = dense_zero(n, k);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < m; ++l) {
            if (sgn(a[i][l]) == 0) continue;
            for (int j = 0; j < k; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

DenseQ dense_transpose(const DenseQ& a, int cols_if_empty) {
    int n = static_cast<int>(a.size());
    int m = n ? static_cast<int>(a[0].size()) : cols_if_empty;
    DenseQ t = dense_zero(m, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) t[j][i] = a[i][j];
    return t;
}

namespace {
// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(DenseQ& a, int cols) {
    std::vector<int> piv;
    int r = 0, n = static_cast<int>(a.size());
    for (int c = 0; c < cols && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (sgn(a[i][c]) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(a[r], a[p]);
        Q inv = 1 / a[r][c];
        const int w = static_cast<int>(a[r].size());  // row ops act on augmented columns too
        for (int j = 0; j < w; ++j) a[r][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || sgn(a[i][c]) == 0) continue;
            Q f = a[i][c];
            for (int j = 0; j < w; ++j) a[i][j] -= f * a[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}
}  // namespace

int dense_rank(DenseQ a) {
    if (a.empty()) return 0;
    return static_cast<int>(rref(a, static_cast<int>(a[0].size())).size());
}

std::vector<std::vector<Q>> dense_nullspace(const DenseQ& a0, int cols) {
    DenseQ a = a0;
    auto piv = rref(a, cols);
    std::vector<bool> is_piv(cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<Q>> out;
    for (int f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Q> x(cols, Q(0));
        x[f] = 1;
        for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = -a[k][f];
        out.push_back(x);
    }
    return out;
}

std::optional<DenseQ> dense_inverse(const DenseQ& a) {
    int n = static_cast<int>(a.size());
    DenseQ aug = dense_zero(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    auto piv = rref(aug, n);
    if (static_cast<int>(piv.size()) != n) return std::nullopt;
    DenseQ inv = dense_zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

}  // namespace cf
