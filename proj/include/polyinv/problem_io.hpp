#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "polyinv/matrix_polynomial.hpp"
#include "polyinv/sensitivity.hpp"
#include "polyinv/solver.hpp"

namespace polyinv {

using json = nlohmann::json;

/// Reads a problem document. Syntax and type errors throw Error(Parse) with
/// the offending field path; invariant violations throw Error(InvalidInput).
ProblemSpec problem_from_json(const json& doc);
ProblemSpec load_problem(const std::filesystem::path& path);

/// The problem with every default materialized; reads back to an equal spec.
json problem_to_json(const ProblemSpec& spec);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const std::string& where);

/// {"n", "k", "coefficients": [A_0, ..., A_k]} with row-major nested arrays.
json polynomial_to_json(const MatrixPolynomial& p);
/// Accepts a bare polynomial object or any report that embeds one under
/// "polynomial".
MatrixPolynomial polynomial_from_json(const json& doc);

json report_to_json(const SolveReport& report, const ProblemSpec& spec);
json verification_to_json(const Verification& v);
json jacobian_to_json(const SpectralJacobian& jac);

/// Parses a file as JSON, mapping syntax errors to Error(Parse).
json read_json_file(const std::filesystem::path& path);

}  // namespace polyinv
