#include "fsipm/io.hpp"

namespace fsipm::io {

SemialgebraicInstance<double> example_instance(const std::string& name,
                                               Index degree) {
  if (name == "stengle") {
    return stengle_instance<double>(degree);
  }
  throw Error(ErrorKind::InvalidConfig,
              "unknown example \"" + name + "\" (available: stengle)");
}

}  // namespace fsipm::io
