#include "permlocal/textio.hpp"

#include <cctype>
#include <stdexcept>

namespace permlocal {

Permutation parse_permutation(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (std::isspace((unsigned char)c) || c == ',') {
      if (!cur.empty()) tokens.push_back(cur), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  if (tokens.empty()) throw std::invalid_argument("empty permutation");

  // A single multi-digit token is the compact form, one value per digit.
  if (tokens.size() == 1 && tokens[0].size() > 1) {
    bool all_digits = true;
    for (char c : tokens[0])
      if (!std::isdigit((unsigned char)c)) all_digits = false;
    if (all_digits && tokens[0].size() <= 9) {
      std::vector<int> vals;
      for (char c : tokens[0]) vals.push_back(c - '0');
      return Permutation(std::move(vals));
    }
  }

  std::vector<int> vals;
  vals.reserve(tokens.size());
  for (const auto& t : tokens) {
    size_t used = 0;
    int v = std::stoi(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad value: " + t);
    vals.push_back(v);
  }
  return Permutation(std::move(vals));
}

std::string format_permutation(const Permutation& p, char sep) {
  std::string out;
  for (int i = 1; i <= p.size(); ++i) {
    if (i > 1) out.push_back(sep);
    out += std::to_string(p(i));
  }
  return out;
}

}  // namespace permlocal
