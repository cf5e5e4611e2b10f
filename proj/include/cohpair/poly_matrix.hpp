#ifndef COHPAIR_POLY_MATRIX_HPP
#define COHPAIR_POLY_MATRIX_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cohpair/polynomial.hpp"

namespace cohpair {

template <class S>
class PolyMatrix {
public:
    PolyMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Polynomial<S>& at(int i, int j) { return entries_[index(i, j)]; }
    const Polynomial<S>& at(int i, int j) const { return entries_[index(i, j)]; }

    PolyMatrix with_column(int col, const std::vector<Polynomial<S>>& column) const {
        if (static_cast<int>(column.size()) != rows_)
            throw std::invalid_argument("replacement column length mismatch");
        PolyMatrix m = *this;
        for (int i = 0; i < rows_; ++i) m.at(i, col) = column[static_cast<std::size_t>(i)];
        return m;
    }

    // Determinant. Exact backend: fraction-free (Bareiss) elimination, which
    // keeps every intermediate entry polynomial and controls coefficient
    // growth. Float backend: division-free Laplace expansion memoized over
    // column subsets (orders here are small).
    Polynomial<S> determinant() const {
        require_square();
        if (rows_ == 0) return Polynomial<S>::one();
        if constexpr (is_exact_v<S>) {
            return determinant_bareiss();
        } else {
            std::map<std::uint64_t, Polynomial<S>> memo;
            std::uint64_t full = (rows_ >= 64) ? ~0ull : ((1ull << rows_) - 1);
            if (rows_ >= 64) throw std::invalid_argument("matrix too large");
            return det_subset(0, full, memo);
        }
    }

    // Classic cofactor expansion; retained as an oracle for small orders.
    Polynomial<S> determinant_cofactor() const {
        require_square();
        if (rows_ == 0) return Polynomial<S>::one();
        std::map<std::uint64_t, Polynomial<S>> memo;
        if (rows_ >= 64) throw std::invalid_argument("matrix too large");
        return det_subset(0, (1ull << rows_) - 1, memo);
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("matrix index");
        return static_cast<std::size_t>(i) * cols_ + j;
    }

    void require_square() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
    }

    Polynomial<S> determinant_bareiss() const {
        const int n = rows_;
        std::vector<Polynomial<S>> m(entries_);
        auto e = [&](int i, int j) -> Polynomial<S>& {
            return m[static_cast<std::size_t>(i) * n + j];
        };
        int sign = 1;
        Polynomial<S> prev = Polynomial<S>::one();
        for (int k = 0; k + 1 < n; ++k) {
            if (e(k, k).is_zero()) {
                int p = -1;
                for (int i = k + 1; i < n; ++i)
                    if (!e(i, k).is_zero()) { p = i; break; }
                if (p < 0) return Polynomial<S>(); // zero column below: det = 0
                for (int j = k; j < n; ++j) std::swap(e(k, j), e(p, j));
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i) {
                for (int j = k + 1; j < n; ++j) {
                    Polynomial<S> num = e(i, j) * e(k, k) - e(i, k) * e(k, j);
                    e(i, j) = divide_exact(num, prev);
                }
                e(i, k) = Polynomial<S>();
            }
            prev = e(k, k);
        }
        Polynomial<S> det = e(n - 1, n - 1);
        return sign < 0 ? -det : det;
    }

    // Determinant of the minor formed by rows row.. and the column set mask.
    Polynomial<S> det_subset(int row, std::uint64_t mask,
                             std::map<std::uint64_t, Polynomial<S>>& memo) const {
        if (mask == 0) return Polynomial<S>::one();
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        Polynomial<S> acc;
        int pos = 0;
        for (int j = 0; j < cols_; ++j) {
            if (!(mask & (1ull << j))) continue;
            if (!at(row, j).is_zero()) {
                Polynomial<S> sub = det_subset(row + 1, mask & ~(1ull << j), memo);
                Polynomial<S> term = at(row, j) * sub;
                if (pos % 2 == 0)
                    acc += term;
                else
                    acc -= term;
            }
            ++pos;
        }
        memo.emplace(mask, acc);
        return acc;
    }

    int rows_, cols_;
    std::vector<Polynomial<S>> entries_;
};

} // namespace cohpair

#endif
