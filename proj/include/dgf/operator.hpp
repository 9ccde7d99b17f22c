#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dgf {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;
using SpMatC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class Hermiticity { hermitian, anti_hermitian, general };

struct Entry
{
    int row, col;
    cplx value;
};

// Square matrix held as merged (row, col, value) entries in row-major order.
class OperatorMatrix
{
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    Hermiticity kind() const { return kind_; }

    void add(int r, int c, cplx v)
    {
        if (r < 0 || c < 0 || r >= dim_ || c >= dim_) throw std::out_of_range("operator entry index out of range");
        if (v != cplx(0)) pending_.push_back({r, c, v});
    }

    // Merge duplicates, drop exact cancellations and classify.
    void finalize()
    {
        pending_.insert(pending_.end(), entries_.begin(), entries_.end());
        std::sort(pending_.begin(), pending_.end(), [](const Entry& a, const Entry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        entries_.clear();
        for (const Entry& e : pending_) {
            if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col)
                entries_.back().value += e.value;
            else
                entries_.push_back(e);
        }
        std::erase_if(entries_, [](const Entry& e) { return e.value == cplx(0); });
        pending_.clear();
        classify();
    }

    cplx at(int r, int c) const
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{r, c}, [](const Entry& e, std::pair<int, int> k) {
            return e.row != k.first ? e.row < k.first : e.col < k.second;
        });
        return (it != entries_.end() && it->row == r && it->col == c) ? it->value : cplx(0);
    }

    MatC dense() const
    {
        MatC m = MatC::Zero(dim_, dim_);
        for (const Entry& e : entries_) m(e.row, e.col) = e.value;
        return m;
    }

    SpMatC sparse() const
    {
        std::vector<Eigen::Triplet<cplx>> trip;
        trip.reserve(entries_.size());
        for (const Entry& e : entries_) trip.emplace_back(e.row, e.col, e.value);
        SpMatC m(dim_, dim_);
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }

    VecC apply(const VecC& x) const
    {
        VecC y = VecC::Zero(dim_);
        for (const Entry& e : entries_) y(e.row) += e.value * x(e.col);
        return y;
    }

    OperatorMatrix& operator+=(const OperatorMatrix& o)
    {
        if (o.dim_ != dim_) throw std::invalid_argument("operator dimension mismatch");
        pending_.insert(pending_.end(), o.entries_.begin(), o.entries_.end());
        finalize();
        return *this;
    }

    double frobenius() const
    {
        double s = 0;
        for (const Entry& e : entries_) s += std::norm(e.value);
        return std::sqrt(s);
    }

private:
    void classify()
    {
        bool herm = true, anti = true;
        for (const Entry& e : entries_) {
            cplx w = at(e.col, e.row);
            if (w != std::conj(e.value)) herm = false;
            if (w != -std::conj(e.value)) anti = false;
            if (!herm && !anti) break;
        }
        kind_ = herm ? Hermiticity::hermitian : (anti ? Hermiticity::anti_hermitian : Hermiticity::general);
    }

    int dim_ = 0;
    std::vector<Entry> entries_;
    std::vector<Entry> pending_;
    Hermiticity kind_ = Hermiticity::hermitian;
};

} // namespace dgf
