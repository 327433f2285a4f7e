#pragma once

#include <string>

#include "json.hpp"

namespace di {

// End-to-end run from a declarative JSON config: intent-set compilation,
// embedding training, optional few-shot prior transfer, fitting, parsing,
// evaluation. Stage artifacts land in the configured output directory,
// are content-hashed into a manifest, and are reused when their inputs
// and parameters are unchanged. Returns the report that is also written
// to <out_dir>/report.json.
nlohmann::json run_pipeline(const std::string& config_path);

}  // namespace di
