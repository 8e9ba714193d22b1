#include "permlocal/svg.hpp"

#include <cstdio>

namespace permlocal {

std::string svg_plot(const Permutation& p) {
  const int n = p.size();
  const double canvas = 1000.0;
  std::string out;
  out.reserve(64 * (size_t)n + 256);
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" "
      "viewBox=\"0 0 1000 1000\">\n";
  out += "<rect width=\"1000\" height=\"1000\" fill=\"white\" stroke=\"black\"/>\n";
  char buf[96];
  for (int i = 1; i <= n; ++i) {
    const double x = canvas * (double)i / (double)(n + 1);
    const double y = canvas - canvas * (double)p(i) / (double)(n + 1);  // y grows upward
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\"/>\n", x, y);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace permlocal
