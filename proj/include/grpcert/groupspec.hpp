#pragma once

#include <memory>
#include <string>
#include <vector>

#include "grpcert/group.hpp"

namespace grpcert {

// Parsed command-line group description. Grammar:
//   cayley:<path> | perm:<path> | extraspecial:<p>:<width>:<exp>
//   | modular:<p>:<n> | abelian:<d1,...,dk>
//   | product:<spec>*<spec> | centralproduct:<spec>*<spec>
// Product operands may be parenthesized; specs round-trip through
// parse/print. Unknown heads are rejected with a position-annotated error.
class GroupSpec {
 public:
  enum class Kind {
    kCayley,
    kPerm,
    kExtraspecial,
    kModular,
    kAbelian,
    kProduct,
    kCentralProduct,
  };

  static GroupSpec parse(const std::string& text);
  std::string print() const;
  // Builds the group (reads files for cayley/perm specs).
  GroupPtr build(int perm_order_cap = 10000) const;

  Kind kind() const { return kind_; }

 private:
  struct Parser;
  static GroupSpec parse_spec(Parser& p);
  static GroupSpec parse_operand(Parser& p);

  Kind kind_ = Kind::kAbelian;
  std::string path_;
  std::vector<int> numbers_;
  std::vector<std::shared_ptr<GroupSpec>> children_;
};

}  // namespace grpcert
