#ifndef LSM_ERRORS_HPP
#define LSM_ERRORS_HPP

#include <stdexcept>

namespace lsm {

// Malformed external input: graph files, images, configs, checkpoints.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model has no applicable solver (non-cut bases at a dimension too large to
// enumerate).
struct UnsupportedModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lsm

#endif
