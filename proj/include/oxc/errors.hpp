#pragma once

#include <stdexcept>
#include <string>

namespace oxc {

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AddressOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A phase transform was handed a topology from the wrong construction stage.
class WrongStage : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The fabric's wiring does not carry the self-routed path (missing or
// misplaced fiber).
class FabricFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested wavelength is already in use at the external input or output.
class WavelengthBusyAtEndpoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fiber on the path already carries the wavelength even though both
// endpoints were free. Never raised by a correctly built fabric.
class InternalContention : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownConnection : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ImportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oxc
