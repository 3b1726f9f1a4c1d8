#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace fountain {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarField = std::function<double(const Vector&)>;
using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

}  // namespace fountain
