#ifndef JCVMA_FIT_IO_HPP
#define JCVMA_FIT_IO_HPP

#include <string>
#include <vector>

#include "jcvma/averaging.hpp"

namespace jcvma {

/// Serialized averaging fit plus the pool column names it was trained
/// against (index 0 is the intercept).
struct SavedFit {
  JcvmaFit fit;
  std::vector<std::string> pool_names;
};

/// Write the fit as a self-describing versioned text artifact. Numbers are
/// emitted in shortest round-trip form, so reloading reproduces the fit
/// bit for bit.
void save_fit(const std::string& path, const JcvmaFit& fit,
              const std::vector<std::string>& pool_names);

/// Parse a fit artifact; throws ParseError on malformed or wrong-version
/// input.
SavedFit load_fit(const std::string& path);

}  // namespace jcvma

#endif  // JCVMA_FIT_IO_HPP
