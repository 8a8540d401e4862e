#pragma once

// SVD of the response matrix and selection of the signal subspace.

#include "errors.hpp"
#include "msr.hpp"

#include <Eigen/SVD>

#include <ostream>
#include <string>
#include <variant>

namespace arcmig {

struct SvdBasis {
    Eigen::VectorXd singular_values; // descending
    Eigen::MatrixXcd left;           // U, columns U_n
    Eigen::MatrixXcd right;          // V, columns V_n
    int signal_rank = 0;             // 0 until select_rank

    int size() const { return static_cast<int>(singular_values.size()); }
};

inline SvdBasis decompose(const Eigen::MatrixXcd& matrix)
{
    if (!matrix.allFinite())
        throw NumericalError("decompose: matrix has non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("decompose: SVD did not converge (matrix " + std::to_string(matrix.rows()) + "x"
                             + std::to_string(matrix.cols()) + ")");
    SvdBasis basis;
    basis.singular_values = svd.singularValues();
    basis.left = svd.matrixU();
    basis.right = svd.matrixV();
    return basis;
}

inline SvdBasis decompose(const MsrMatrix& msr) { return decompose(msr.entries); }

struct ExplicitRank {
    int rank;
};

/// Keep every sigma_m >= tau * sigma_1.
struct ThresholdRank {
    double tau;
};

using RankPolicy = std::variant<ExplicitRank, ThresholdRank>;

inline SvdBasis select_rank(SvdBasis basis, const RankPolicy& policy)
{
    const int n = basis.size();
    if (const auto* e = std::get_if<ExplicitRank>(&policy)) {
        if (e->rank < 1 || e->rank > n)
            throw ConfigError("select_rank: explicit rank " + std::to_string(e->rank) + " outside [1, "
                              + std::to_string(n) + "]");
        basis.signal_rank = e->rank;
        return basis;
    }
    const double tau = std::get<ThresholdRank>(policy).tau;
    if (!(tau > 0.0) || tau > 1.0)
        throw ConfigError("select_rank: threshold must lie in (0, 1]");
    int m = 0;
    const double sigma1 = n > 0 ? basis.singular_values(0) : 0.0;
    if (sigma1 > 0.0)
        while (m < n && basis.singular_values(m) >= tau * sigma1)
            ++m;
    if (m == 0)
        throw NumericalError("select_rank: no signal subspace (all singular values vanish)");
    basis.signal_rank = m;
    return basis;
}

/// CSV "index,value" with 1-based index.
inline void write_singular_values_csv(std::ostream& os, const SvdBasis& basis)
{
    os << "index,value\n";
    os.precision(17);
    for (int i = 0; i < basis.size(); ++i)
        os << (i + 1) << ',' << basis.singular_values(i) << '\n';
}

} // namespace arcmig
