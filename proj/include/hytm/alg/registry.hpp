#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hytm/alg/alg1.hpp"
#include "hytm/alg/alg2.hpp"
#include "hytm/alg/hynorec.hpp"
#include "hytm/alg/tl2.hpp"
#include "hytm/alg/tle.hpp"

namespace hytm {

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"alg1", "alg2", "tle", "hynorec", "hynorec-star", "tl2"};
  return names;
}

inline std::unique_ptr<Algorithm> make_algorithm(std::string_view name, const Layout& layout,
                                                 const Alg1Options& alg1 = {}) {
  if (name == "alg1") return std::make_unique<Alg1>(layout, alg1);
  if (name == "alg2") return std::make_unique<Alg2>(layout);
  if (name == "tle") return std::make_unique<Tle>(layout);
  if (name == "hynorec") return std::make_unique<HybridNorec>(layout, false);
  if (name == "hynorec-star") return std::make_unique<HybridNorec>(layout, true);
  if (name == "tl2") return std::make_unique<Tl2>(layout);
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

}  // namespace hytm
