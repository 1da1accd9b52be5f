#include "resmooth/raster.hpp"

#include <stdexcept>

namespace resmooth {

long long AugOp::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw std::runtime_error("aug op '" + name + "' has no parameter '" + key +
                           "'");
}

std::string AugOp::to_string() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += params[i].first + "=" + std::to_string(params[i].second);
  }
  out += ')';
  return out;
}

AugOp AugOp::parse(const std::string& line) {
  auto open = line.find('(');
  auto close = line.rfind(')');
  if (open == std::string::npos || close == std::string::npos ||
      close < open) {
    throw std::runtime_error("malformed aug op descriptor: " + line);
  }
  AugOp op;
  op.name = line.substr(0, open);
  std::string body = line.substr(open + 1, close - open - 1);
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    std::string item = body.substr(pos, comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("malformed aug op parameter: " + item);
    }
    op.params.emplace_back(item.substr(0, eq),
                           std::stoll(item.substr(eq + 1)));
    pos = comma + 1;
  }
  return op;
}

const char* aug_kind_name(AugKind k) {
  switch (k) {
    case AugKind::standard: return "standard";
    case AugKind::rand_augment: return "rand_augment";
    case AugKind::jigsaw: return "jigsaw";
    case AugKind::rotation: return "rotation";
    case AugKind::cutout: return "cutout";
  }
  return "standard";
}

AugKind aug_kind_from_name(const std::string& name) {
  if (name == "standard") return AugKind::standard;
  if (name == "rand_augment") return AugKind::rand_augment;
  if (name == "jigsaw") return AugKind::jigsaw;
  if (name == "rotation") return AugKind::rotation;
  if (name == "cutout") return AugKind::cutout;
  throw std::runtime_error("unknown augmentation kind: " + name);
}

}  // namespace resmooth
