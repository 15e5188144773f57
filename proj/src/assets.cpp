#include "cct/assets.hpp"

#include "cct/util.hpp"

#include <cstdlib>

#ifndef CCT_DEFAULT_ASSET_DIR
#define CCT_DEFAULT_ASSET_DIR "assets"
#endif

namespace cct {

std::string asset_dir() {
    if (const char* env = std::getenv("CCT_ASSET_DIR"); env && *env) return env;
    return CCT_DEFAULT_ASSET_DIR;
}

std::string load_asset(const std::string& relative) {
    return read_file(asset_dir() + "/" + relative);
}

} // namespace cct
