#pragma once

#include <complex>

#include <Eigen/Dense>

namespace iswpt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// (A + A^H) / 2
inline CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) * 0.5; }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace iswpt
