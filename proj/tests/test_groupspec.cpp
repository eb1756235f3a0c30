#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "grpcert/groupspec.hpp"

using namespace grpcert;

TEST_CASE("spec round-trips through parse/print") {
  for (const std::string& text :
       {std::string("abelian:3,3"), std::string("abelian:243"),
        std::string("extraspecial:3:5:3"), std::string("modular:3:4"),
        std::string("product:abelian:3,3*modular:3:3"),
        std::string("centralproduct:extraspecial:3:3:3*abelian:9"),
        std::string("product:(product:abelian:3*abelian:3)*abelian:9"),
        std::string("cayley:/tmp/some_table.json")}) {
    GroupSpec spec = GroupSpec::parse(text);
    CHECK(spec.print() == text);
    CHECK(GroupSpec::parse(spec.print()).print() == text);
  }
}

TEST_CASE("unknown heads and malformed specs carry positions") {
  try {
    GroupSpec::parse("bogus:1");
    FAIL("expected BadSpecError");
  } catch (const BadSpecError& e) {
    CHECK(std::string(e.what()).find("position 0") != std::string::npos);
  }
  try {
    GroupSpec::parse("product:abelian:3");
    FAIL("expected BadSpecError");
  } catch (const BadSpecError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
  CHECK_THROWS_AS(GroupSpec::parse("abelian:"), BadSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("abelian:3,x"), BadSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("modular:3"), BadSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("abelian:3*abelian:3"), BadSpecError);
}

TEST_CASE("specs build the advertised groups") {
  CHECK(GroupSpec::parse("abelian:9").build()->label() == "cyclic(9)");
  CHECK(GroupSpec::parse("extraspecial:5:3:5").build()->order() == 125);
  CHECK(GroupSpec::parse("product:abelian:3*modular:3:3").build()->order() ==
        81);
  GroupPtr cp =
      GroupSpec::parse("centralproduct:extraspecial:3:3:3*extraspecial:3:3:3")
          .build();
  CHECK(cp->order() == 243);
  CHECK(cp->center_set().count() == 3);
}

TEST_CASE("cayley and perm files") {
  {
    std::ofstream out("/tmp/grpcert_test_cayley.json");
    out << R"({"order": 3, "table": [0,1,2, 1,2,0, 2,0,1]})";
  }
  GroupPtr g = GroupSpec::parse("cayley:/tmp/grpcert_test_cayley.json").build();
  CHECK(g->order() == 3);
  CHECK(g->exponent() == 3);

  {
    std::ofstream out("/tmp/grpcert_test_perm.json");
    out << R"({"degree": 3, "generators": [[1,0,2],[1,2,0]]})";
  }
  GroupPtr s3 = GroupSpec::parse("perm:/tmp/grpcert_test_perm.json").build();
  CHECK(s3->order() == 6);

  CHECK_THROWS_AS(GroupSpec::parse("cayley:/tmp/does_not_exist.json").build(),
                  IoError);
  {
    std::ofstream out("/tmp/grpcert_test_bad.json");
    out << R"({"order": 3})";
  }
  CHECK_THROWS_AS(GroupSpec::parse("cayley:/tmp/grpcert_test_bad.json").build(),
                  BadSpecError);
  std::remove("/tmp/grpcert_test_cayley.json");
  std::remove("/tmp/grpcert_test_perm.json");
  std::remove("/tmp/grpcert_test_bad.json");
}
