#pragma once

#include <stdexcept>
#include <string>

namespace gensplat {

// Error taxonomy shared by the library and the CLI. The CLI maps these onto
// exit codes: data/format problems -> 2, numerical problems -> 3.

struct InvalidInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BehindCameraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RenderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AugmentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyMaskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateOutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gensplat
