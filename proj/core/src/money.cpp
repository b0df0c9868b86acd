#include "wtpleak/money.hpp"

#include <cstdio>
#include <cstdlib>

namespace wtpleak {

std::string format_usd(Cents amount) {
  bool negative = amount < 0;
  std::int64_t abs = negative ? -amount : amount;
  std::int64_t whole = abs / 100;
  std::int64_t frac = abs % 100;
  char buf[40];
  if (frac == 0) {
    std::snprintf(buf, sizeof(buf), "%s$%lld", negative ? "-" : "",
                  static_cast<long long>(whole));
  } else {
    std::snprintf(buf, sizeof(buf), "%s$%lld.%02lld", negative ? "-" : "",
                  static_cast<long long>(whole), static_cast<long long>(frac));
  }
  return buf;
}

}  // namespace wtpleak
