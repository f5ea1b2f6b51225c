#include "support/helpers.hpp"

using namespace milo;

TEST_CASE("csv parses a rectangular numeric table with a header") {
  const CsvTable t = parse_csv("x1,x2,y\n1,1,6\n1.5,2,8.25\n");
  CHECK(t.header == std::vector<std::string>{"x1", "x2", "y"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<double>{1.0, 1.0, 6.0});
  CHECK(t.rows[1] == std::vector<double>{1.5, 2.0, 8.25});
}

TEST_CASE("blank lines and trailing newlines are tolerated") {
  const CsvTable t = parse_csv("a,b\n\n1,2\n\n3,4");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1] == std::vector<double>{3.0, 4.0});
}

TEST_CASE("malformed csv fails with the line number") {
  try {
    parse_csv("a,b\n1,2\n3,oops\n");
    FAIL("expected parse_failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_failure);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  REQUIRE_ERRC(parse_csv("a,b\n1\n"), Errc::parse_failure);      // ragged row
  REQUIRE_ERRC(parse_csv("a,b\n1,2 3\n"), Errc::parse_failure);  // trailing junk in cell
  REQUIRE_ERRC(parse_csv(""), Errc::parse_failure);              // no header
}

TEST_CASE("render keeps floats visibly floats") {
  CsvTable t;
  t.header = {"y"};
  t.rows = {{16.0}, {2.5}};
  CHECK(render_csv(t) == "y\n16.0\n2.5\n");
}

TEST_CASE("csv files round-trip on disk") {
  testutil::TempDir dir;
  CsvTable t;
  t.header = {"x", "y"};
  t.rows = {{1.0, 6.5}, {-0.25, 3.0}};
  write_csv(dir.file("d.csv"), t);
  const CsvTable back = read_csv(dir.file("d.csv"));
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
}

TEST_CASE("datasets pick their target column by name") {
  const CsvTable t = parse_csv("x1,y,x2\n1,6,2\n3,8,4\n");
  const Dataset ds = dataset_from_csv(t, std::string("y"));
  CHECK(ds.n_samples() == 2);
  CHECK(ds.n_features() == 2);
  CHECK(ds.X().f64_data() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(ds.y().f64_data() == std::vector<double>{6.0, 8.0});

  const Dataset unlabeled = dataset_from_csv(t, std::nullopt);
  CHECK(unlabeled.n_features() == 3);
  CHECK_FALSE(unlabeled.has_y());

  REQUIRE_ERRC(dataset_from_csv(t, std::string("missing")), Errc::invalid_args);
}
