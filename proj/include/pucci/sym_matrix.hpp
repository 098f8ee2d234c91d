#pragma once

#include <array>
#include <cstddef>

#include "pucci/errors.hpp"

namespace pucci {

/// Symmetric n x n matrix, n in {1,2,3}, stored as the packed upper triangle
/// (a00, a01, a02, a11, a12, a22). Value type; cheap to copy.
class SymMatrix {
public:
    explicit SymMatrix(int n) : n_(n), a_{} {
        if (n < 1 || n > 3) throw ContractViolation("SymMatrix: n must be 1, 2 or 3");
    }

    static SymMatrix zero(int n) { return SymMatrix(n); }

    static SymMatrix diag(int n, double d0, double d1 = 0.0, double d2 = 0.0) {
        SymMatrix m(n);
        m.set(0, 0, d0);
        if (n > 1) m.set(1, 1, d1);
        if (n > 2) m.set(2, 2, d2);
        return m;
    }

    static SymMatrix identity(int n) { return diag(n, 1.0, 1.0, 1.0); }

    int n() const { return n_; }

    double operator()(int i, int j) const { return a_[index(i, j)]; }
    void set(int i, int j, double v) { a_[index(i, j)] = v; }

    SymMatrix operator+(const SymMatrix& o) const {
        check_dim(o);
        SymMatrix r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    SymMatrix operator-() const {
        SymMatrix r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = -a_[k];
        return r;
    }

    SymMatrix operator*(double t) const {
        SymMatrix r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * t;
        return r;
    }

    double trace() const {
        double t = (*this)(0, 0);
        if (n_ > 1) t += (*this)(1, 1);
        if (n_ > 2) t += (*this)(2, 2);
        return t;
    }

    /// Max absolute entry; used for tolerance scaling.
    double max_abs() const;

    /// Eigenvalues in ascending order (first n entries valid).
    /// n=1,2: closed form. n=3: cyclic Jacobi iterated to off-diagonal
    /// magnitude <= 1e-13 * max|entry|.
    std::array<double, 3> eigenvalues() const;

private:
    int n_;
    std::array<double, 6> a_;

    static int index(int i, int j) {
        if (i > j) { const int t = i; i = j; j = t; }
        // (0,0)->0 (0,1)->1 (0,2)->2 (1,1)->3 (1,2)->4 (2,2)->5
        static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return map[i][j];
    }

    void check_dim(const SymMatrix& o) const {
        if (o.n_ != n_) throw ContractViolation("SymMatrix: dimension mismatch");
    }
};

}  // namespace pucci
