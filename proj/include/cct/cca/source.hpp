#pragma once

#include "cct/cca/profile.hpp"

#include <optional>
#include <string>

namespace cct::cca {

// Shipped source text of one base CCA program.
const std::string& base_source(CcaId id);

// Splices a customization wrapper into one of the shipped base sources:
// an embedded profile block (machine-readable), the rate constants, a
// cct_customize() routine implementing floor/ceiling/loss-fallback, and a
// rewired cong_avoid hook that calls the base then the wrapper.  Output
// is byte-stable for identical inputs.  Fault flags inject the documented
// defects (COMPILE_FAULT drops a semicolon, BPF_FAULT adds an unbounded
// loop).  Throws UnknownBase if `base` is not byte-identical to a shipped
// source or does not match profile.base_cca.
std::string render_patched_source(const ControlProfile& profile, const std::string& base);

// Recovers the profile embedded by render_patched_source.  Returns
// nullopt when no profile block is present; throws ParseError when a
// block exists but does not parse.
std::optional<ControlProfile> extract_profile(const std::string& source);

} // namespace cct::cca
