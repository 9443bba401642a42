#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include "support.hpp"
#include "umbrella/figure.hpp"

using namespace umbrella;
using namespace umbrella::testing;

namespace {

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Tag balance check: every opened element is closed or self-closing.
bool balanced_xml(const std::string& svg) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else if (m[3] != "/") {
      stack.push_back(m[2]);
    }
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("worked example figure: ellipse, two circles, centres and one tangency marker") {
  const GDSMapping f = worked_example();
  FigureInput in;
  in.tangency_points = {{2, -1}};
  const std::string svg = render_svg(f, in);
  CHECK(count(svg, "class=\"level ellipse\"") == 1);
  CHECK(count(svg, "class=\"level circle\"") == 2);
  CHECK(count(svg, "class=\"level ") == 3);
  CHECK(count(svg, "class=\"center\"") == 3);
  CHECK(count(svg, "class=\"tangency\"") == 1);
  CHECK(balanced_xml(svg));

  const Point2 img = figure_view(f, in).to_image({2, -1});
  char expected[96];
  std::snprintf(expected, sizeof expected, "class=\"tangency\" cx=\"%.3f\" cy=\"%.3f\"", img.x1, img.x2);
  CHECK(svg.find(expected) != std::string::npos);
}

TEST_CASE("figure for a mapping without singular points uses the probe") {
  FigureInput in;
  in.probe = Point2{2, -1};
  const std::string svg = render_svg(worked_example_l4(), in);
  CHECK(count(svg, "class=\"level ") == 4);
  CHECK(count(svg, "class=\"tangency\"") == 0);
  CHECK(count(svg, "class=\"probe\"") == 1);
  CHECK(balanced_xml(svg));
}

TEST_CASE("figure of Lorentzian levels draws open curves") {
  const GDSMapping l = make_special(MapForm::lorentzian, {{0, 0}, {1, 2}, {-1, 0.5}});
  FigureInput in;
  in.probe = Point2{0.3, -0.7};
  const std::string svg = render_svg(l, in);
  CHECK(count(svg, "class=\"level ") == 3);
  CHECK(balanced_xml(svg));
}

TEST_CASE("figure errors") {
  try {
    render_svg(worked_example_l4(), FigureInput{});
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
  FigureInput in;
  in.tangency_points = {{2, -1}};
  try {
    render_figure(worked_example(), in, "/nonexistent-dir/x/fig.svg");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
  const auto path = std::filesystem::temp_directory_path() / "umbrella_test_fig.svg";
  const std::string svg = render_figure(worked_example(), in, path);
  std::ifstream back(path);
  const std::string read((std::istreambuf_iterator<char>(back)), std::istreambuf_iterator<char>());
  CHECK(read == svg);
  std::filesystem::remove(path);
}
