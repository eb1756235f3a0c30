#include "grpcert/groupspec.hpp"

#include <cctype>
#include <fstream>

#include "json.hpp"

namespace grpcert {

namespace {

[[noreturn]] void fail_at(size_t pos, const std::string& what) {
  throw BadSpecError("group spec error at position " + std::to_string(pos) +
                     ": " + what);
}

}  // namespace

struct GroupSpec::Parser {
  const std::string& s;
  size_t pos = 0;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  std::string take_until(const std::string& stops) {
    size_t start = pos;
    while (!eof() && stops.find(s[pos]) == std::string::npos) ++pos;
    return s.substr(start, pos - start);
  }

  int take_int(const std::string& stops) {
    size_t start = pos;
    std::string tok = take_until(stops);
    if (tok.empty()) fail_at(start, "expected a number");
    for (char c : tok)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail_at(start, "expected a number, got '" + tok + "'");
    long v = std::stol(tok);
    if (v <= 0 || v > 1000000) fail_at(start, "number out of range");
    return static_cast<int>(v);
  }

  void expect(char c) {
    if (eof() || s[pos] != c)
      fail_at(pos, std::string("expected '") + c + "'");
    ++pos;
  }
};

GroupSpec GroupSpec::parse(const std::string& text) {
  Parser p{text};
  GroupSpec spec = parse_spec(p);
  if (!p.eof()) fail_at(p.pos, "trailing input");
  return spec;
}

GroupSpec GroupSpec::parse_operand(Parser& p) {
  if (!p.eof() && p.peek() == '(') {
    ++p.pos;
    GroupSpec inner = parse_spec(p);
    p.expect(')');
    return inner;
  }
  return parse_spec(p);
}

GroupSpec GroupSpec::parse_spec(Parser& p) {
  size_t head_pos = p.pos;
  std::string head = p.take_until(":*)");
  if (p.eof() || p.peek() != ':')
    fail_at(head_pos, "expected '<head>:', got '" + head + "'");
  ++p.pos;  // ':'

  GroupSpec spec;
  if (head == "cayley" || head == "perm") {
    spec.kind_ = head == "cayley" ? Kind::kCayley : Kind::kPerm;
    spec.path_ = p.take_until("*)");
    if (spec.path_.empty()) fail_at(p.pos, "expected a file path");
    return spec;
  }
  if (head == "extraspecial") {
    spec.kind_ = Kind::kExtraspecial;
    spec.numbers_.push_back(p.take_int(":"));
    p.expect(':');
    spec.numbers_.push_back(p.take_int(":"));
    p.expect(':');
    spec.numbers_.push_back(p.take_int("*)"));
    return spec;
  }
  if (head == "modular") {
    spec.kind_ = Kind::kModular;
    spec.numbers_.push_back(p.take_int(":"));
    p.expect(':');
    spec.numbers_.push_back(p.take_int("*)"));
    return spec;
  }
  if (head == "abelian") {
    spec.kind_ = Kind::kAbelian;
    spec.numbers_.push_back(p.take_int(",*)"));
    while (!p.eof() && p.peek() == ',') {
      ++p.pos;
      spec.numbers_.push_back(p.take_int(",*)"));
    }
    return spec;
  }
  if (head == "product" || head == "centralproduct") {
    spec.kind_ =
        head == "product" ? Kind::kProduct : Kind::kCentralProduct;
    spec.children_.push_back(std::make_shared<GroupSpec>(parse_operand(p)));
    p.expect('*');
    spec.children_.push_back(std::make_shared<GroupSpec>(parse_operand(p)));
    return spec;
  }
  fail_at(head_pos, "unknown head '" + head + "'");
}

std::string GroupSpec::print() const {
  auto wrap = [](const GroupSpec& child) {
    std::string s = child.print();
    if (s.find('*') != std::string::npos) return "(" + s + ")";
    return s;
  };
  switch (kind_) {
    case Kind::kCayley:
      return "cayley:" + path_;
    case Kind::kPerm:
      return "perm:" + path_;
    case Kind::kExtraspecial:
      return "extraspecial:" + std::to_string(numbers_[0]) + ":" +
             std::to_string(numbers_[1]) + ":" + std::to_string(numbers_[2]);
    case Kind::kModular:
      return "modular:" + std::to_string(numbers_[0]) + ":" +
             std::to_string(numbers_[1]);
    case Kind::kAbelian: {
      std::string s = "abelian:";
      for (size_t i = 0; i < numbers_.size(); ++i)
        s += (i ? "," : "") + std::to_string(numbers_[i]);
      return s;
    }
    case Kind::kProduct:
      return "product:" + wrap(*children_[0]) + "*" + wrap(*children_[1]);
    case Kind::kCentralProduct:
      return "centralproduct:" + wrap(*children_[0]) + "*" +
             wrap(*children_[1]);
  }
  return "?";
}

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open group file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw BadSpecError("cannot parse JSON in " + path + ": " + e.what());
  }
  return doc;
}

}  // namespace

GroupPtr GroupSpec::build(int perm_order_cap) const {
  switch (kind_) {
    case Kind::kCayley: {
      nlohmann::json doc = load_json(path_);
      if (!doc.contains("order") || !doc.contains("table"))
        throw BadSpecError("cayley file needs 'order' and row-major 'table'");
      int n = doc["order"].get<int>();
      std::vector<int> flat = doc["table"].get<std::vector<int>>();
      if (static_cast<int>(flat.size()) != n * n)
        throw BadSpecError("cayley table has wrong length");
      std::vector<std::vector<int>> table(n, std::vector<int>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) table[i][j] = flat[i * n + j];
      return FiniteGroup::from_cayley_table(table, "cayley:" + path_);
    }
    case Kind::kPerm: {
      nlohmann::json doc = load_json(path_);
      if (!doc.contains("degree") || !doc.contains("generators"))
        throw BadSpecError("perm file needs 'degree' and 'generators'");
      return FiniteGroup::from_permutations(
          doc["degree"].get<int>(),
          doc["generators"].get<std::vector<std::vector<int>>>(),
          "perm:" + path_, perm_order_cap);
    }
    case Kind::kExtraspecial:
      return extraspecial_group(numbers_[0], numbers_[1], numbers_[2]);
    case Kind::kModular:
      return modular_group(numbers_[0], numbers_[1]);
    case Kind::kAbelian:
      if (numbers_.size() == 1) return cyclic_group(numbers_[0]);
      return abelian_group(numbers_);
    case Kind::kProduct:
      return direct_product(children_[0]->build(perm_order_cap),
                            children_[1]->build(perm_order_cap));
    case Kind::kCentralProduct:
      return central_product(children_[0]->build(perm_order_cap),
                             children_[1]->build(perm_order_cap));
  }
  throw BadSpecError("unreachable spec kind");
}

}  // namespace grpcert
