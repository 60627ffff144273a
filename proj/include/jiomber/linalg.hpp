#pragma once

#include <complex>

#include <Eigen/Dense>

namespace jiomber {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Antipodal bit, always +1 or -1.
using Bit = int;

inline Bit hard_decision(double re) { return re >= 0.0 ? +1 : -1; }

}  // namespace jiomber
