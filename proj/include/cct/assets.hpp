#pragma once

#include <string>

namespace cct {

// Directory holding the shipped data assets (bitrate table, base CCA sources,
// reference bundles).  Defaults to the build-time source path; the
// CCT_ASSET_DIR environment variable overrides it for relocated installs.
std::string asset_dir();

// Loads <asset_dir>/<relative> or throws ParseError.
std::string load_asset(const std::string& relative);

} // namespace cct
