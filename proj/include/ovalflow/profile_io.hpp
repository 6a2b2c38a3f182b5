#pragma once

#include <filesystem>
#include <string>

#include "ovalflow/profile.hpp"

namespace ovalflow {

/// Shortest decimal text with 17 significant digits; parses back bit-exact.
std::string format_real(double x);
double parse_real(std::string_view text);

/// CSV "theta,r" rows plus a JSON sidecar holding n, J and m.
void save_profile(const SymmetricProfile& p, const std::filesystem::path& csv_path,
                  const std::filesystem::path& sidecar_path);
SymmetricProfile load_profile(const std::filesystem::path& csv_path,
                              const std::filesystem::path& sidecar_path);

std::string profile_csv(const SymmetricProfile& p);

}  // namespace ovalflow
