#pragma once

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nst/types.hpp"

namespace nst {

/// Support-size rule f(k) mapping the iteration counter k >= 1 to the number
/// of indices kept at that iteration. Built-in kinds are non-decreasing in k;
/// eval never exceeds the cap.
class Schedule {
public:
  enum class Kind { Constant, Linear, Quadratic, Custom };

  static Schedule constant(Index s) {
    if (s < 1) throw std::invalid_argument("Schedule: constant size must be >= 1");
    Schedule sch;
    sch.kind_ = Kind::Constant;
    sch.param_ = s;
    return sch;
  }

  static Schedule linear(Index c) {
    if (c < 1) throw std::invalid_argument("Schedule: linear slope must be >= 1");
    Schedule sch;
    sch.kind_ = Kind::Linear;
    sch.param_ = c;
    return sch;
  }

  static Schedule quadratic() {
    Schedule sch;
    sch.kind_ = Kind::Quadratic;
    return sch;
  }

  static Schedule custom(std::vector<Index> table) {
    if (table.empty()) throw std::invalid_argument("Schedule: empty custom table");
    for (Index v : table)
      if (v < 1) throw std::invalid_argument("Schedule: custom sizes must be >= 1");
    Schedule sch;
    sch.kind_ = Kind::Custom;
    sch.table_ = std::move(table);
    return sch;
  }

  Kind kind() const { return kind_; }
  Index cap() const { return cap_; }

  Schedule with_cap(Index cap) const {
    if (cap < 1) throw std::invalid_argument("Schedule: cap must be >= 1");
    Schedule sch = *this;
    sch.cap_ = cap;
    return sch;
  }

  /// min(raw f(k), cap). The counter starts at k = 1 for the first support
  /// selection. Custom tables hold their last value past the end.
  Index eval(Index k) const {
    if (k < 1) throw std::invalid_argument("Schedule::eval: k must be >= 1");
    Index raw = 0;
    switch (kind_) {
      case Kind::Constant: raw = param_; break;
      case Kind::Linear:
        raw = (k > cap_ / param_) ? cap_ : param_ * k;  // overflow guard
        break;
      case Kind::Quadratic:
        raw = (k > Index(94906265) || k * k > cap_) ? cap_ : k * k;
        break;
      case Kind::Custom: {
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(k) - 1,
                                             table_.size() - 1);
        raw = table_[i];
        break;
      }
    }
    return std::min(raw, cap_);
  }

  /// Config-string syntax: "const:s", "lin:c", "quad", "custom:1,4,9,...".
  static Schedule parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto to_index = [&](const std::string& tok) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("Schedule: bad number in '" + text + "'");
      }
      if (pos != tok.size() || v < 1)
        throw std::invalid_argument("Schedule: bad number in '" + text + "'");
      return static_cast<Index>(v);
    };
    if (head == "const") return constant(to_index(tail));
    if (head == "lin") return linear(to_index(tail));
    if (head == "quad") {
      if (!tail.empty()) throw std::invalid_argument("Schedule: 'quad' takes no argument");
      return quadratic();
    }
    if (head == "custom") {
      std::vector<Index> table;
      std::stringstream ss(tail);
      std::string tok;
      while (std::getline(ss, tok, ',')) table.push_back(to_index(tok));
      return custom(std::move(table));
    }
    throw std::invalid_argument("Schedule: unknown kind '" + head + "'");
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Constant: return "const:" + std::to_string(param_);
      case Kind::Linear: return "lin:" + std::to_string(param_);
      case Kind::Quadratic: return "quad";
      case Kind::Custom: {
        std::string out = "custom:";
        for (std::size_t i = 0; i < table_.size(); ++i) {
          if (i) out += ',';
          out += std::to_string(table_[i]);
        }
        return out;
      }
    }
    return "";
  }

private:
  Kind kind_ = Kind::Quadratic;
  Index param_ = 1;
  std::vector<Index> table_;
  Index cap_ = std::numeric_limits<Index>::max();
};

}  // namespace nst
