#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "CLI11.hpp"
#include "hytm/cli/config.hpp"

using namespace hytm::cli;

TEST(ConfigFile, ParsesKeyValueLines) {
  std::istringstream in(
      "# comment\n"
      "[bench]\n"
      "alg = alg1,tle\n"
      "  --u=40  \n"
      "; another comment\n"
      "\n"
      "title = \"two words\"\n");
  const auto kv = parse_config(in);
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"alg", "alg1,tle"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"u", "40"}));
  EXPECT_EQ(kv[2], (std::pair<std::string, std::string>{"title", "two words"}));
  EXPECT_EQ(config_arguments(kv).front(), "--alg=alg1,tle");
}

TEST(ConfigFile, RejectsLinesWithoutValue) {
  std::istringstream missing("alg\n");
  EXPECT_THROW(parse_config(missing), ConfigError);
  std::istringstream empty_key(" = 3\n");
  EXPECT_THROW(parse_config(empty_key), ConfigError);
}

TEST(ConfigFile, EntriesOverrideFlags) {
  CLI::App app;
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string alg = "alg1";
  unsigned u = 10;
  bool ff = false;
  app.add_option("--alg", alg);
  app.add_option("--u", u);
  app.add_flag("--fast-fast", ff);
  std::istringstream in("u = 40\nfast-fast = true\n");
  std::vector<std::string> args{"--alg", "tl2", "--u", "0"};
  for (auto& a : config_arguments(parse_config(in))) args.push_back(a);
  std::reverse(args.begin(), args.end());
  app.parse(args);
  EXPECT_EQ(alg, "tl2");
  EXPECT_EQ(u, 40u);
  EXPECT_TRUE(ff);
}

TEST(ConfigFile, UnknownKeysAreParseErrors) {
  CLI::App app;
  unsigned u = 0;
  app.add_option("--u", u);
  std::istringstream in("bogus = 1\n");
  auto args = config_arguments(parse_config(in));
  EXPECT_THROW(app.parse(args), CLI::ParseError);
}

TEST(Lists, SplitTrimsAndRejectsEmptyItems) {
  EXPECT_EQ(split_list("alg1, tle ,tl2"), (std::vector<std::string>{"alg1", "tle", "tl2"}));
  EXPECT_EQ(split_list("W1"), (std::vector<std::string>{"W1"}));
  EXPECT_THROW(split_list("a,,b"), ConfigError);
  EXPECT_THROW(split_list(""), ConfigError);
  EXPECT_EQ(split_numbers<unsigned>("0,10,40"), (std::vector<unsigned>{0, 10, 40}));
  EXPECT_THROW(split_numbers<unsigned>("10x"), ConfigError);
  EXPECT_THROW(split_numbers<unsigned>("-1"), ConfigError);
}

TEST(Lists, Ranges) {
  EXPECT_EQ(parse_range("2..5"), (std::vector<std::size_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_range("8"), (std::vector<std::size_t>{8}));
  EXPECT_EQ(parse_range("3,7"), (std::vector<std::size_t>{3, 7}));
  EXPECT_THROW(parse_range("5..2"), ConfigError);
  EXPECT_THROW(parse_range("1..x"), ConfigError);
}
