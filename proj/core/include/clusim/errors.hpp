#pragma once

#include <stdexcept>
#include <string>

namespace clusim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DuplicateOid : Error {
  using Error::Error;
};
struct DanglingReference : Error {
  using Error::Error;
};
struct UnknownOid : Error {
  using Error::Error;
};
struct UnknownEdge : Error {
  using Error::Error;
};
struct UnknownPage : Error {
  using Error::Error;
};
struct InvalidParams : Error {
  using Error::Error;
};
struct EmptySchema : Error {
  using Error::Error;
};
struct EmptyDb : Error {
  using Error::Error;
};
struct BadMix : Error {
  using Error::Error;
};
struct ObjectTooLarge : Error {
  using Error::Error;
};
struct NodeTooLarge : Error {
  using Error::Error;
};
struct NoCommonAttributes : Error {
  using Error::Error;
};
struct InvalidLink : Error {
  using Error::Error;
};

}  // namespace clusim
