#pragma once

// Parsing of generator words: whitespace-separated tokens `name`, `name^k`
// (k a possibly negative integer), with superscript spellings such as
// `name⁻¹` accepted as synonyms for `name^-1`.

#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfsim {

struct WordFactor {
  std::string name;
  long exponent = 1;
};

inline std::vector<WordFactor> parse_word(const std::string& input) {
  // Normalize superscript markers to ASCII '^' notation. UTF-8: '⁻' is
  // E2 81 BB, '¹' C2 B9, '²' C2 B2, '³' C2 B3, '⁰'..'⁹' E2 81 B0.. .
  std::string text;
  std::size_t i = 0;
  bool in_superscript = false;
  auto digit = [&](char d) {
    if (!in_superscript) {
      text += '^';
      in_superscript = true;
    }
    text += d;
  };
  while (i < input.size()) {
    if (input.compare(i, 3, "⁻") == 0) {  // superscript minus
      text += "^-";
      in_superscript = true;
      i += 3;
    } else if (input.compare(i, 2, "¹") == 0) {
      digit('1');
      i += 2;
    } else if (input.compare(i, 2, "²") == 0) {
      digit('2');
      i += 2;
    } else if (input.compare(i, 2, "³") == 0) {
      digit('3');
      i += 2;
    } else if (input.compare(i, 3, "⁰") == 0) {
      digit('0');
      i += 3;
    } else if (i + 3 <= input.size() && static_cast<unsigned char>(input[i]) == 0xE2 &&
               static_cast<unsigned char>(input[i + 1]) == 0x81 &&
               static_cast<unsigned char>(input[i + 2]) >= 0xB4 &&
               static_cast<unsigned char>(input[i + 2]) <= 0xB9) {
      digit(static_cast<char>('4' + (static_cast<unsigned char>(input[i + 2]) - 0xB4)));
      i += 3;
    } else {
      if (in_superscript && input[i] != '^') in_superscript = false;
      text += input[i];
      ++i;
    }
  }

  std::vector<WordFactor> out;
  i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip_ws();
  while (i < text.size()) {
    if (!(std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      throw std::invalid_argument("parse_word: unexpected character '" + std::string(1, text[i]) + "'");
    std::string name;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      name += text[i++];
    long exp = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = (text[i++] == '-');
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw std::invalid_argument("parse_word: malformed exponent after '^'");
      long mag = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        mag = mag * 10 + (text[i++] - '0');
      exp = neg ? -mag : mag;
    }
    out.push_back({std::move(name), exp});
    skip_ws();
  }
  return out;
}

}  // namespace selfsim
