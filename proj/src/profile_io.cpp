#include "ovalflow/profile_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ovalflow/errors.hpp"

namespace ovalflow {

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DomainError("malformed real number '" + std::string(text) + "'");
  }
  return x;
}

std::string profile_csv(const SymmetricProfile& p) {
  std::string out = "theta,r\n";
  for (int i = 0; i <= p.m(); ++i) {
    out += format_real(p.theta(i));
    out += ',';
    out += format_real(p.r(i));
    out += '\n';
  }
  return out;
}

void save_profile(const SymmetricProfile& p, const std::filesystem::path& csv_path,
                  const std::filesystem::path& sidecar_path) {
  {
    std::ofstream os(csv_path, std::ios::binary);
    if (!os) throw DomainError("cannot write " + csv_path.string());
    os << profile_csv(p);
  }
  std::ofstream js(sidecar_path, std::ios::binary);
  if (!js) throw DomainError("cannot write " + sidecar_path.string());
  js << nlohmann::json{{"n", p.n()}, {"J", p.J()}, {"m", p.m()}}.dump(2) << '\n';
}

SymmetricProfile load_profile(const std::filesystem::path& csv_path,
                              const std::filesystem::path& sidecar_path) {
  std::ifstream js(sidecar_path);
  if (!js) throw DomainError("cannot read " + sidecar_path.string());
  const auto meta = nlohmann::json::parse(js);
  const int n = meta.at("n").get<int>();
  const int J = meta.at("J").get<int>();
  const int m = meta.at("m").get<int>();

  std::ifstream is(csv_path);
  if (!is) throw DomainError("cannot read " + csv_path.string());
  std::string line;
  std::getline(is, line);
  if (line != "theta,r") throw DomainError("profile CSV must start with header 'theta,r'");
  std::vector<double> r;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("profile CSV row without comma");
    r.push_back(parse_real(std::string_view(line).substr(comma + 1)));
  }
  if (static_cast<int>(r.size()) != m + 1) {
    throw DomainError("profile CSV row count does not match sidecar m");
  }
  return SymmetricProfile(n, J, std::move(r));
}

}  // namespace ovalflow
