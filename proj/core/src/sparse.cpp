#include "dynbiot/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynbiot {

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vector& x, Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector scaled(const Vector& x, double alpha) {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
    return y;
}

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_offsets,
                           std::vector<int> col_indices, std::vector<double> values)
    : rows_(rows), cols_(cols), row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)), values_(std::move(values)) {
    if (static_cast<int>(row_offsets_.size()) != rows_ + 1 ||
        col_indices_.size() != values_.size() ||
        row_offsets_.back() != static_cast<int>(values_.size())) {
        throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
    }
}

void SparseMatrix::apply(const Vector& x, Vector& y) const {
    if (static_cast<int>(x.size()) != cols_) {
        throw std::invalid_argument("SparseMatrix::apply: dimension mismatch");
    }
    y.assign(rows_, 0.0);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            s += values_[k] * x[col_indices_[k]];
        }
        y[r] = s;
    }
}

Vector SparseMatrix::apply(const Vector& x) const {
    Vector y;
    apply(x, y);
    return y;
}

Vector SparseMatrix::apply_transpose(const Vector& x) const {
    if (static_cast<int>(x.size()) != rows_) {
        throw std::invalid_argument("SparseMatrix::apply_transpose: dimension mismatch");
    }
    Vector y(cols_, 0.0);
    for (int r = 0; r < rows_; ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            y[col_indices_[k]] += values_[k] * xr;
        }
    }
    return y;
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<int> offsets(cols_ + 1, 0);
    for (int k = 0; k < static_cast<int>(nnz()); ++k) ++offsets[col_indices_[k] + 1];
    for (int c = 0; c < cols_; ++c) offsets[c + 1] += offsets[c];
    std::vector<int> cols(nnz());
    std::vector<double> vals(nnz());
    std::vector<int> next(offsets.begin(), offsets.end() - 1);
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            const int pos = next[col_indices_[k]]++;
            cols[pos] = r;
            vals[pos] = values_[k];
        }
    }
    return SparseMatrix(cols_, rows_, std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::value_at(int row, int col) const {
    for (int k = row_offsets_[row]; k < row_offsets_[row + 1]; ++k) {
        if (col_indices_[k] == col) return values_[k];
    }
    return 0.0;
}

Vector SparseMatrix::diagonal() const {
    const int n = std::min(rows_, cols_);
    Vector d(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = value_at(i, i);
    return d;
}

SparseMatrix SparseMatrix::add(const SparseMatrix& a, const SparseMatrix& b, double alpha) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("SparseMatrix::add: shape mismatch");
    }
    SparseBuilder builder(a.rows(), a.cols());
    builder.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.rows(); ++r) {
        for (int k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
            builder.add(r, a.col_indices()[k], a.values()[k]);
        }
        for (int k = b.row_offsets()[r]; k < b.row_offsets()[r + 1]; ++k) {
            builder.add(r, b.col_indices()[k], alpha * b.values()[k]);
        }
    }
    return builder.build();
}

SparseMatrix SparseMatrix::scaled_copy(double alpha) const {
    std::vector<double> vals(values_);
    for (double& v : vals) v *= alpha;
    return SparseMatrix(rows_, cols_, row_offsets_, col_indices_, std::move(vals));
}

Vector matvec(const SparseMatrix& a, const Vector& x) { return a.apply(x); }

void SparseBuilder::add(int row, int col, double value) {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
        throw std::out_of_range("SparseBuilder::add: index out of range");
    }
    triplets_.push_back({row, col, value});
}

SparseMatrix SparseBuilder::build() const {
    std::vector<int> offsets(rows_ + 1, 0);
    for (const auto& t : triplets_) ++offsets[t.row + 1];
    for (int r = 0; r < rows_; ++r) offsets[r + 1] += offsets[r];

    // Bucket by row, then sort each row by column and merge duplicates.
    std::vector<int> order(triplets_.size());
    {
        std::vector<int> next(offsets.begin(), offsets.end() - 1);
        for (std::size_t i = 0; i < triplets_.size(); ++i) {
            order[next[triplets_[i].row]++] = static_cast<int>(i);
        }
    }

    std::vector<int> out_offsets(rows_ + 1, 0);
    std::vector<int> out_cols;
    std::vector<double> out_vals;
    out_cols.reserve(triplets_.size());
    out_vals.reserve(triplets_.size());
    std::vector<int> row_entries;
    for (int r = 0; r < rows_; ++r) {
        row_entries.assign(order.begin() + offsets[r], order.begin() + offsets[r + 1]);
        // Stable sort keeps insertion order within duplicate columns, so the
        // summation order is deterministic.
        std::stable_sort(row_entries.begin(), row_entries.end(),
                         [&](int a, int b) { return triplets_[a].col < triplets_[b].col; });
        const int row_start = static_cast<int>(out_cols.size());
        for (int idx : row_entries) {
            const auto& t = triplets_[idx];
            if (static_cast<int>(out_cols.size()) > row_start && out_cols.back() == t.col) {
                out_vals.back() += t.value;
            } else {
                out_cols.push_back(t.col);
                out_vals.push_back(t.value);
            }
        }
        out_offsets[r + 1] = static_cast<int>(out_cols.size());
    }
    return SparseMatrix(rows_, cols_, std::move(out_offsets), std::move(out_cols),
                        std::move(out_vals));
}

BlockSystem BlockSystem::assemble(const SparseMatrix& uu, const SparseMatrix& up,
                                  const SparseMatrix& pu, const SparseMatrix& pp) {
    const int nu = uu.rows();
    const int np = pp.rows();
    if (uu.cols() != nu || pp.cols() != np || up.rows() != nu || up.cols() != np ||
        pu.rows() != np || pu.cols() != nu) {
        throw std::invalid_argument("BlockSystem::assemble: inconsistent block shapes");
    }
    SparseBuilder builder(nu + np, nu + np);
    builder.reserve(uu.nnz() + up.nnz() + pu.nnz() + pp.nnz());
    auto add_block = [&builder](const SparseMatrix& m, int row0, int col0) {
        for (int r = 0; r < m.rows(); ++r) {
            for (int k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) {
                builder.add(row0 + r, col0 + m.col_indices()[k], m.values()[k]);
            }
        }
    };
    add_block(uu, 0, 0);
    add_block(up, 0, nu);
    add_block(pu, nu, 0);
    add_block(pp, nu, nu);

    BlockSystem sys;
    sys.n_u = nu;
    sys.n_p = np;
    sys.matrix = builder.build();
    return sys;
}

Vector BlockSystem::concat(const Vector& u, const Vector& p) const {
    if (static_cast<int>(u.size()) != n_u || static_cast<int>(p.size()) != n_p) {
        throw std::invalid_argument("BlockSystem::concat: size mismatch");
    }
    Vector x;
    x.reserve(u.size() + p.size());
    x.insert(x.end(), u.begin(), u.end());
    x.insert(x.end(), p.begin(), p.end());
    return x;
}

void BlockSystem::split(const Vector& x, Vector& u, Vector& p) const {
    if (static_cast<int>(x.size()) != n_u + n_p) {
        throw std::invalid_argument("BlockSystem::split: size mismatch");
    }
    u.assign(x.begin(), x.begin() + n_u);
    p.assign(x.begin() + n_u, x.end());
}

}  // namespace dynbiot
