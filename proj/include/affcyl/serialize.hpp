#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "affcyl/classify.hpp"
#include "affcyl/polynomial.hpp"

namespace affcyl {

inline constexpr const char* kReportSchema = "affcyl.report/1";
inline constexpr const char* kVerdictSchema = "affcyl.verdict/1";

/// Complex numbers are [re, im]; matrices are lists of rows.
nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);
/// Infinite ratios are written as the string "inf".
nlohmann::json ratio_to_json(double x);

nlohmann::json polynomial_to_json(const HomogeneousPolynomial& p, const std::vector<std::string>& vars);
nlohmann::json flat_to_json(const AmbientFlat& f);
AmbientFlat flat_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RankProfile& p);
nlohmann::json to_json(const LeafData& d);
nlohmann::json to_json(const PencilAnalysis& p);
nlohmann::json to_json(const Diagonalization& d);
nlohmann::json to_json(const SampleEvidence& e);
nlohmann::json to_json(const ClassifyConfig& c);

/// Verdict document: verdict, reason, dimensions, residuals, recovered
/// generators / director / vertex, notes and the config used.
nlohmann::json verdict_document(const std::string& name, const Classification& c);
/// Full report: the verdict document plus per-sample evidence.
nlohmann::json analysis_report(const std::string& name, const Classification& c);

std::string csv_header();
std::string csv_row(const std::string& name, const Classification& c);

/// Pretty JSON with sorted keys and a trailing newline.
std::string dump(const nlohmann::json& j);

} // namespace affcyl
