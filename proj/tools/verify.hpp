#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mnls::cli {

struct ItemResult {
  bool pass = false;
  std::string detail;
};

struct VerifyItem {
  std::string name;
  std::string description;
  /// The flag perturbs the checked quantity by 10% before comparison.
  std::function<ItemResult(bool fault)> run;
};

const std::vector<VerifyItem>& verify_items();

/// Prints one line per item; returns the number of failures, or -1 when
/// `only` names no item.
int run_verify(const std::string& only, const std::string& fault);

}  // namespace mnls::cli
