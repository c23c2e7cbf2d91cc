#pragma once

#include <json.hpp>

#include "rsk/experiments.hpp"
#include "rsk/metrics.hpp"

namespace rsk {

inline constexpr int kReportSchema = 1;

std::string_view version() noexcept;

nlohmann::json to_json(const MetricReport& r);
nlohmann::json to_json(const SweepResult& r);
nlohmann::json to_json(const PredictivityResult& r);
nlohmann::json to_json(const AxiomReport& r);
nlohmann::json to_json(const Matrix& m);

}  // namespace rsk
