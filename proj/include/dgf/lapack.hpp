#pragma once

// Thin wrappers over the LAPACKE routines used by the library.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef LAPACK_COMPLEX_CPP
#define LAPACK_COMPLEX_CPP
#endif
#include <lapacke.h>

#include <Eigen/Dense>

namespace dgf {

struct NumericalError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

namespace lapack {

namespace detail {
// lapacke may be configured with the C99 complex type; the layouts agree.
inline lapack_complex_double* z(std::complex<double>* p) { return reinterpret_cast<lapack_complex_double*>(p); }
inline const lapack_complex_double* z(const std::complex<double>* p)
{
    return reinterpret_cast<const lapack_complex_double*>(p);
}
} // namespace detail

// General complex eigenproblem. Left vectors u satisfy u^H A = w u^H.
inline void geev(Eigen::MatrixXcd a, Eigen::VectorXcd& w, Eigen::MatrixXcd* vl, Eigen::MatrixXcd* vr)
{
    const lapack_int n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    if (vl) vl->resize(n, n);
    if (vr) vr->resize(n, n);
    // zgeev wants a valid leading dimension even for unreferenced outputs
    std::complex<double> dummy[1];
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, vl ? 'V' : 'N', vr ? 'V' : 'N', n, detail::z(a.data()), n, detail::z(w.data()),
                                    detail::z(vl ? vl->data() : dummy), vl ? n : 1, detail::z(vr ? vr->data() : dummy),
                                    vr ? n : 1);
    if (info > 0)
        throw NumericalError("eigensolver failed to converge; eigenvalues " + std::to_string(info) +
                             ".. are not available");
    if (info < 0) throw std::invalid_argument("zgeev: illegal argument " + std::to_string(-info));
}

inline Eigen::VectorXd singular_values(Eigen::MatrixXcd a)
{
    const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
    Eigen::VectorXd s(std::min(m, n));
    std::vector<double> superb(std::max<lapack_int>(1, std::min(m, n) - 1));
    std::complex<double> dummy[1];
    lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, detail::z(a.data()), m, s.data(), detail::z(dummy), 1,
                                     detail::z(dummy), 1,
                                     superb.data());
    if (info > 0) throw NumericalError("singular value decomposition failed to converge");
    if (info < 0) throw std::invalid_argument("zgesvd: illegal argument " + std::to_string(-info));
    return s;
}

// LU factorization held for repeated solves.
class LU
{
public:
    explicit LU(Eigen::MatrixXcd a) : a_(std::move(a)), piv_(a_.rows())
    {
        const lapack_int n = static_cast<lapack_int>(a_.rows());
        lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, detail::z(a_.data()), n, piv_.data());
        if (info < 0) throw std::invalid_argument("zgetrf: illegal argument");
        singular_ = info > 0;
    }
    bool singular() const { return singular_; }

    Eigen::VectorXcd solve(Eigen::VectorXcd b) const
    {
        const lapack_int n = static_cast<lapack_int>(a_.rows());
        lapack_int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, detail::z(a_.data()), n, piv_.data(),
                                         detail::z(b.data()), n);
        if (info != 0) throw NumericalError("triangular solve failed");
        return b;
    }

private:
    Eigen::MatrixXcd a_;
    std::vector<lapack_int> piv_;
    bool singular_ = false;
};

} // namespace lapack
} // namespace dgf
