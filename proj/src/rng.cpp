#include "bopim/rng.hpp"

#include "bopim/error.hpp"

namespace bopim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InvalidT: return "InvalidT";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::TooManyContacts: return "TooManyContacts";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream,
                             std::uint64_t index) noexcept {
  return mix64(mix64(mix64(master) ^ stream) + index);
}

}  // namespace bopim
