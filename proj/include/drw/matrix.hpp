#pragma once

#include "drw/decomposition.hpp"

#include <functional>
#include <vector>

namespace drw {

// dense matrix of Forms over one Context
class Matrix {
public:
    Matrix() = default;
    Matrix(const Context& ctx, int rows, int cols)
        : ctx_(ctx), rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows * cols), Form(ctx)) {}

    static Matrix identity(const Context& ctx, int r) {
        Matrix I(ctx, r, r);
        for (int i = 0; i < r; ++i) I.at(i, i) = Form::constant(ctx, 1);
        return I;
    }

    const Context& ctx() const { return ctx_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Form& at(int i, int j) { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
    const Form& at(int i, int j) const { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
    const std::vector<Form>& entries() const { return e_; }

    bool is_zero() const {
        for (const auto& f : e_)
            if (!f.is_zero()) return false;
        return true;
    }

    Matrix map(const std::function<Form(const Form&)>& fn) const {
        Matrix r(ctx_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = fn(e_[i]);
        return r;
    }

    bool operator==(const Matrix& o) const { return ctx_ == o.ctx_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }

    void check_shape(const Matrix& o, bool same) const {
        if (!(ctx_ == o.ctx_)) throw Error(ErrorKind::context_mismatch, "matrices from different contexts");
        if (same ? (rows_ != o.rows_ || cols_ != o.cols_) : cols_ != o.rows_)
            throw Error(ErrorKind::precondition, "matrix shape mismatch");
    }

private:
    Context ctx_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Form> e_;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_shape(b, true);
    Matrix r(a.ctx(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_shape(b, true);
    Matrix r(a.ctx(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
    return r;
}

inline Matrix operator-(const Matrix& a) {
    return a.map([](const Form& f) { return -f; });
}

inline Matrix operator*(const mpq_class& s, const Matrix& a) {
    return a.map([&](const Form& f) { return s * f; });
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_shape(b, false);
    Matrix r(a.ctx(), a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            Form s(a.ctx());
            for (int k = 0; k < a.cols(); ++k)
                if (!a.at(i, k).is_zero() && !b.at(k, j).is_zero()) s += a.at(i, k) * b.at(k, j);
            r.at(i, j) = std::move(s);
        }
    return r;
}

inline Matrix d(const Matrix& a) {
    return a.map([](const Form& f) { return d(f); });
}
inline Matrix F(const Matrix& a) {
    return a.map([](const Form& f) { return F(f); });
}
inline Matrix truncate(const Matrix& a, int level) {
    return a.map([&](const Form& f) { return truncate(f, level); });
}
inline Matrix truncate(const Matrix& a) { return truncate(a, a.ctx().m); }

inline bool congruent(const Matrix& a, const Matrix& b) { return truncate(a - b).is_zero(); }

inline Matrix int_part(const Matrix& a) {
    return a.map([](const Form& f) { return decompose(f).int_part; });
}
inline Matrix frp_part(const Matrix& a) {
    return a.map([](const Form& f) { return decompose(f).frp; });
}
inline Matrix dfrp_part(const Matrix& a) {
    return a.map([](const Form& f) { return decompose(f).dfrp; });
}
inline Matrix frac_part(const Matrix& a) {
    return a.map([](const Form& f) { return fractional_weight_part(f); });
}

// entrywise minimum of vp_form
inline long vp(const Matrix& a) {
    long v = kInfinity;
    for (const auto& f : a.entries()) v = std::min(v, vp_form(f));
    return v;
}

// minimum coefficient valuation, allowed to be negative
inline long coefficient_scale(const Matrix& a) {
    long v = kInfinity;
    for (const auto& f : a.entries()) v = std::min({v, min_coeff_vp(f), min_coeff_vp(d(f))});
    return v;
}

inline XRational zeta_check(const Matrix& a, const mpq_class& eps) {
    XRational z;
    for (const auto& f : a.entries()) z = xmin(z, zeta_check(f, eps));
    return z;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix r(a.ctx(), a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return r;
}

}  // namespace drw
