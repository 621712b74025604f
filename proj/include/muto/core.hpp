#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace muto {

// Raised for malformed input, violated preconditions and failed I/O.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when user-supplied configuration is invalid. The CLI maps this to
// exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Language : std::uint8_t { Source = 0, Target = 1 };

inline constexpr std::array<Language, 2> kLanguages{Language::Source,
                                                    Language::Target};

constexpr std::size_t index_of(Language lang) {
  return static_cast<std::size_t>(lang);
}

constexpr Language opposite(Language lang) {
  return lang == Language::Source ? Language::Target : Language::Source;
}

// Short tag used in every file format ("s" / "t").
std::string_view language_tag(Language lang);
Language parse_language_tag(std::string_view tag);

// Dirichlet concentrations are totals; the symmetric per-component value is
// the total divided by the support size (alpha / K, lambda / |m|, ...).
struct Hyperparams {
  int k = 10;
  double alpha = 50.0;
  double lambda = 1.0;
  double gamma = 1.0;

  void validate() const;
};

using CountMatrix =
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

}  // namespace muto
