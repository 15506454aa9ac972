#ifndef DYNBIOT_SPARSE_HPP
#define DYNBIOT_SPARSE_HPP

#include <span>
#include <vector>

namespace dynbiot {

using Vector = std::vector<double>;

// Small dense-vector helpers; summation order is fixed for determinism.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
void axpy(double alpha, const Vector& x, Vector& y);  // y += alpha*x
Vector scaled(const Vector& x, double alpha);

/// Immutable CSR sparse matrix. Column indices are sorted and unique per row.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> col_indices,
                 std::vector<double> values);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const int> row_offsets() const { return row_offsets_; }
    std::span<const int> col_indices() const { return col_indices_; }
    std::span<const double> values() const { return values_; }

    /// y = A x. Throws on dimension mismatch.
    void apply(const Vector& x, Vector& y) const;
    Vector apply(const Vector& x) const;

    /// y = A^T x.
    Vector apply_transpose(const Vector& x) const;

    SparseMatrix transpose() const;

    double value_at(int row, int col) const;  ///< 0 if not stored
    Vector diagonal() const;

    /// Entrywise A + alpha*B on the union pattern.
    static SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0);
    SparseMatrix scaled_copy(double alpha) const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> col_indices_;
    std::vector<double> values_;
};

Vector matvec(const SparseMatrix& a, const Vector& x);

/// Triplet accumulator; duplicates sum on build().
class SparseBuilder {
  public:
    SparseBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int row, int col, double value);
    void reserve(std::size_t n) { triplets_.reserve(n); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    SparseMatrix build() const;

  private:
    struct Triplet {
        int row;
        int col;
        double value;
    };
    int rows_;
    int cols_;
    std::vector<Triplet> triplets_;
};

/// 2x2 block layout [A uu, A up; A pu, A pp] flattened to one CSR matrix,
/// with the displacement block leading. Keeps the offsets for splitting
/// solution vectors back into fields.
struct BlockSystem {
    int n_u = 0;
    int n_p = 0;
    SparseMatrix matrix;

    int size() const { return n_u + n_p; }

    static BlockSystem assemble(const SparseMatrix& uu, const SparseMatrix& up,
                                const SparseMatrix& pu, const SparseMatrix& pp);

    Vector concat(const Vector& u, const Vector& p) const;
    void split(const Vector& x, Vector& u, Vector& p) const;
};

}  // namespace dynbiot

#endif
