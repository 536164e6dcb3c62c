#ifndef VISGRAPH_ERROR_HPP
#define VISGRAPH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace visgraph {

/// Input could not be read or did not satisfy the series contract.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical stage failed on otherwise valid input (degenerate data, optimizer failure).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writing an output sink failed.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace visgraph

#endif  // VISGRAPH_ERROR_HPP
