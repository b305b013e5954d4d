#pragma once

#include <stdexcept>
#include <string>

namespace cutlgf {

/// Base class of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vertex sits on the interface or a cell is cut in more than one piece.
class DegenerateCut : public Error {
 public:
  using Error::Error;
};

class EmptyInterface : public Error {
 public:
  using Error::Error;
};

/// A lattice offset outside the precomputed Green's function table.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// A double-layer source with no five-point neighbor outside the active set.
class IsolatedSource : public Error {
 public:
  using Error::Error;
};

class SingularP2 : public Error {
 public:
  using Error::Error;
};

/// An exterior vertex with no admissible extrapolation direction.
class NoAdmissibleDirection : public Error {
 public:
  using Error::Error;
};

/// CG met p^T A p <= 0; the operator is not SPD.
class Breakdown : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Zero-frequency symbol of the unscreened single layer.
class DivergentMode : public Error {
 public:
  using Error::Error;
};

class UnknownSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace cutlgf
