#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "anonet/graph.hpp"
#include "anonet/rational.hpp"

namespace anonet {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill = T(0))
        : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
        if (rows < 0 || cols < 0) throw ValidationError("negative matrix dimension");
    }
    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& at(int i, int j) { return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(c_) + static_cast<std::size_t>(j)]; }
    const T& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(c_) + static_cast<std::size_t>(j)]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.r_) throw ValidationError("matrix product dimension mismatch");
        Matrix out(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const T& aik = a.at(i, k);
                if (aik == T(0)) continue;
                for (int j = 0; j < b.c_; ++j) out.at(i, j) += aik * b.at(k, j);
            }
        return out;
    }
    friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
        if (a.c_ != static_cast<int>(v.size())) throw ValidationError("matrix-vector size mismatch");
        std::vector<T> out(static_cast<std::size_t>(a.r_), T(0));
        for (int i = 0; i < a.r_; ++i)
            for (int j = 0; j < a.c_; ++j) out[static_cast<std::size_t>(i)] += a.at(i, j) * v[static_cast<std::size_t>(j)];
        return out;
    }
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

inline RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = Rat(m.at(i, j));
    return out;
}

inline IntMatrix adjacency_matrix(const DirectedMultigraph& g) {
    IntMatrix a(g.n(), g.n());
    for (const Edge& e : g.edges()) a.at(e.src, e.dst) += 1;
    return a;
}

// Push-Sum update matrix: A[i][j] = mult(j->i)/outdeg(j). Column-stochastic,
// and 1/n-safe whenever the round graph is simple.
inline RatMatrix pushsum_matrix(const DirectedMultigraph& g) {
    RatMatrix a(g.n(), g.n());
    for (const Edge& e : g.edges()) {
        int d = g.out_degree(e.src);
        ANONET_INVARIANT(d > 0, "pushsum matrix column with zero outdegree");
        a.at(e.dst, e.src) += Rat(1, d);
    }
    return a;
}

inline bool is_column_stochastic(const RatMatrix& m) {
    if (m.rows() != m.cols()) return false;
    for (int j = 0; j < m.cols(); ++j) {
        Rat s = 0;
        for (int i = 0; i < m.rows(); ++i) {
            if (m.at(i, j) < 0) return false;
            s += m.at(i, j);
        }
        if (s != 1) return false;
    }
    return true;
}

inline bool is_row_stochastic(const RatMatrix& m) {
    if (m.rows() != m.cols()) return false;
    for (int i = 0; i < m.rows(); ++i) {
        Rat s = 0;
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j) < 0) return false;
            s += m.at(i, j);
        }
        if (s != 1) return false;
    }
    return true;
}

// Every positive entry at least alpha (the matrix must be non-negative).
inline bool is_alpha_safe(const RatMatrix& m, const Rat& alpha) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Rat& x = m.at(i, j);
            if (x < 0) return false;
            if (x > 0 && x < alpha) return false;
        }
    return true;
}

// Backward product of a chronological list: A(t')x...xA(t).
inline RatMatrix backward_product(const std::vector<RatMatrix>& chronological) {
    if (chronological.empty()) throw ValidationError("backward product of an empty sequence");
    RatMatrix acc = chronological.front();
    for (std::size_t i = 1; i < chronological.size(); ++i) acc = chronological[i] * acc;
    return acc;
}

// Associated graph: edge (j, i) present iff m[i][j] > 0.
inline DirectedMultigraph associated_graph(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("associated graph of a non-square matrix");
    std::vector<Edge> edges;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m.at(i, j) > 0) edges.push_back({j, i});
    return DirectedMultigraph(m.rows(), std::move(edges));
}

// Dobrushin ergodic coefficient: 1 - min_{i != j} sum_k min(P_ik, P_jk).
// A 1x1 matrix has no off-diagonal pair; by convention the coefficient is 0.
inline Rat dobrushin(const RatMatrix& p) {
    if (p.rows() != p.cols()) throw ValidationError("dobrushin of a non-square matrix");
    if (p.rows() <= 1) return Rat(0);
    std::optional<Rat> best;
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.rows(); ++j) {
            if (i == j) continue;
            Rat s = 0;
            for (int k = 0; k < p.cols(); ++k) s += std::min(p.at(i, k), p.at(j, k));
            if (!best || s < *best) best = s;
        }
    return Rat(1) - *best;
}

inline Rat spread(const std::vector<Rat>& v) {
    ANONET_INVARIANT(!v.empty(), "spread of an empty vector");
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

struct KernelResult {
    std::vector<Int> generator;  // positive, coprime entries
    std::string error;           // nonempty on failure
    explicit operator bool() const { return error.empty(); }
};

// One-dimensional kernel of a square integer matrix. Elimination is
// fraction-free (Bareiss) over the integers; the single kernel vector is
// then recovered by exact rational back-substitution, denominators cleared,
// entries made coprime. Fails when the nullity is not exactly one or no
// strictly positive generator exists.
inline KernelResult kernel_generator(const IntMatrix& m) {
    if (m.rows() != m.cols()) return {{}, "kernel expects a square matrix"};
    int n = m.rows();
    if (n == 0) return {{}, "kernel of an empty matrix"};
    IntMatrix a = m;
    std::vector<int> pivot_cols;
    Int prev = 1;
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int sel = -1;
        for (int i = rank; i < n; ++i)
            if (a.at(i, col) != 0) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != rank)
            for (int j = 0; j < n; ++j) std::swap(a.at(sel, j), a.at(rank, j));
        for (int i = rank + 1; i < n; ++i) {
            for (int j = col + 1; j < n; ++j) {
                Int num = a.at(rank, col) * a.at(i, j) - a.at(i, col) * a.at(rank, j);
                ANONET_INVARIANT(num % prev == 0, "fraction-free division failed");
                a.at(i, j) = num / prev;
            }
            a.at(i, col) = 0;
        }
        prev = a.at(rank, col);
        pivot_cols.push_back(col);
        ++rank;
    }
    if (rank != n - 1)
        return {{}, "kernel dimension is " + std::to_string(n - rank) + ", expected 1"};

    int free_col = -1;
    for (int j = 0; j < n; ++j)
        if (std::find(pivot_cols.begin(), pivot_cols.end(), j) == pivot_cols.end()) free_col = j;

    std::vector<Rat> z(static_cast<std::size_t>(n), Rat(0));
    z[static_cast<std::size_t>(free_col)] = 1;
    for (int i = rank - 1; i >= 0; --i) {
        int c = pivot_cols[static_cast<std::size_t>(i)];
        Rat s = 0;
        for (int j = c + 1; j < n; ++j)
            if (a.at(i, j) != 0) s += Rat(a.at(i, j)) * z[static_cast<std::size_t>(j)];
        z[static_cast<std::size_t>(c)] = -s / Rat(a.at(i, c));
    }

    Int l = 1;
    for (const Rat& q : z) l = mp::lcm(l, denominator(q));
    std::vector<Int> gen;
    for (const Rat& q : z) gen.push_back(numerator(q) * (l / denominator(q)));
    Int g = 0;
    for (const Int& x : gen) g = mp::gcd(g, x);
    ANONET_INVARIANT(g != 0, "kernel generator is zero");
    for (Int& x : gen) x /= g;
    bool pos = true, neg = true;
    for (const Int& x : gen) {
        if (x <= 0) pos = false;
        if (x >= 0) neg = false;
    }
    if (neg)
        for (Int& x : gen) x = -x;
    else if (!pos)
        return {{}, "kernel has no strictly positive generator"};
    return {std::move(gen), ""};
}

struct PerronCheck {
    bool ok = false;
    Rat alpha;          // shift making M + alpha*I non-negative
    std::string detail;
};

/// Diagnostic: M should have a one-dimensional kernel spanned by a positive
// vector, the Perron eigenvector of M + alpha*I at eigenvalue alpha.
inline PerronCheck check_perron(const IntMatrix& m) {
    PerronCheck out;
    Int min_diag = 0;
    for (int i = 0; i < m.rows(); ++i) min_diag = std::min(min_diag, m.at(i, i));
    out.alpha = Rat(1 - min_diag);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i != j && m.at(i, j) < 0) {
                out.detail = "negative off-diagonal entry";
                return out;
            }
    KernelResult k = kernel_generator(m);
    if (!k) {
        out.detail = k.error;
        return out;
    }
    out.ok = true;
    out.detail = "kernel dimension 1 with positive generator";
    return out;
}

}  // namespace anonet
