#pragma once

#include <stdexcept>
#include <string>

#include "oneshot/channel.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// Malformed or structurally inconsistent JSON input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// {"labels":[...], "dims":[...], "entries":[[re,im],...]} with entries row-major.
HermitianOperator operator_from_json(const std::string& text);
std::string operator_to_json(const HermitianOperator& op);

// {"kraus":[[[re,im],...], ...], "in_dims":[...], "out_dims":[...]} with each
// Kraus operator row-major (out × in). Optional "in_labels" / "out_labels"
// default to A1.. and B1...
Channel channel_from_json(const std::string& text);
std::string channel_to_json(const Channel& ch);

std::string read_text_file(const std::string& path);
HermitianOperator load_operator(const std::string& path);
Channel load_channel(const std::string& path);

}  // namespace oneshot
