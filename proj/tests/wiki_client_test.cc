//
// Copyright 2026 The xlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "xlp/wiki_client.h"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "test_util.h"

namespace xlp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

// Serves api.php on a loopback port with a caller-supplied handler.
class MockWiki {
 public:
  using Handler =
      std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit MockWiki(Handler handler) {
    server_.Get("/w/api.php",
                [this, handler](const httplib::Request& req,
                                httplib::Response& res) {
                  ++requests_;
                  handler(req, res);
                });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockWiki() {
    server_.stop();
    thread_.join();
  }

  CategoryFetchOptions Options() const {
    CategoryFetchOptions options;
    options.endpoint =
        "http://127.0.0.1:" + std::to_string(port_) + "/w/api.php";
    options.initial_backoff = std::chrono::milliseconds(1);
    options.timeout = std::chrono::seconds(5);
    return options;
  }

  int requests() const { return requests_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
};

void Json(httplib::Response& res, const std::string& body) {
  res.set_content(body, "application/json");
}

TEST(CategoryTitleTest, Templates) {
  CategoryFetchOptions options;
  EXPECT_EQ(*CategoryTitle("br", LexiconKind::kGivenNames, options),
            "Category:Breton given names");
  EXPECT_EQ(*CategoryTitle("br", LexiconKind::kPlaces, options),
            "Category:br:Places");
  EXPECT_FALSE(CategoryTitle("zz-unknown", LexiconKind::kGivenNames, options)
                   .ok());
  EXPECT_EQ(LanguageName("cy"), "Welsh");
}

TEST(CleanMemberTitleTest, Examples) {
  EXPECT_EQ(CleanMemberTitle("Paris (Texas)", 0), "Paris");
  EXPECT_EQ(CleanMemberTitle("Appendix:Yann", 100), "Yann");
  EXPECT_EQ(CleanMemberTitle("Bolz-enor Pariz", 0), "Bolz-enor Pariz");
}

TEST(FetchCategoryTest, FollowsContinuationDedupsAndSkipsSubcategories) {
  MockWiki wiki([](const httplib::Request& req, httplib::Response& res) {
    EXPECT_EQ(req.get_param_value("list"), "categorymembers");
    EXPECT_EQ(req.get_param_value("cmtitle"), "Category:Breton given names");
    if (!req.has_param("cmcontinue")) {
      Json(res,
           R"({"continue":{"cmcontinue":"page2"},"query":{"categorymembers":[)"
           R"({"ns":0,"title":"Yann"},{"ns":14,"title":"Category:Sub"}]}})");
    } else {
      EXPECT_EQ(req.get_param_value("cmcontinue"), "page2");
      Json(res,
           R"({"query":{"categorymembers":[)"
           R"({"ns":0,"title":"Yann"},{"ns":0,"title":"Nolwenn"}]}})");
    }
  });
  auto r = FetchCategory("br", LexiconKind::kGivenNames, wiki.Options());
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_THAT(r->lexicon.entries(), ElementsAre("Nolwenn", "Yann"));
  EXPECT_EQ(r->pages_requested, 2u);
  EXPECT_EQ(r->titles_seen, 3u);
  EXPECT_TRUE(r->warnings.empty());
}

TEST(FetchCategoryTest, PageLimitStopsEarly) {
  MockWiki wiki([](const httplib::Request&, httplib::Response& res) {
    Json(res, R"({"continue":{"cmcontinue":"again"},)"
              R"("query":{"categorymembers":[{"ns":0,"title":"Brest"}]}})");
  });
  CategoryFetchOptions options = wiki.Options();
  options.page_limit = 3;
  auto r = FetchCategory("br", LexiconKind::kPlaces, options);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->pages_requested, 3u);
  EXPECT_EQ(wiki.requests(), 3);
}

TEST(FetchCategoryTest, ServerErrorsExhaustRetries) {
  MockWiki wiki([](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  auto r = FetchCategory("br", LexiconKind::kPlaces, wiki.Options());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kUnavailable);
  EXPECT_EQ(wiki.requests(), 3);
}

TEST(FetchCategoryTest, RecoversAfterTransientError) {
  std::atomic<int> calls{0};
  MockWiki wiki([&](const httplib::Request&, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    Json(res, R"({"query":{"categorymembers":[{"ns":0,"title":"Brest"}]}})");
  });
  auto r = FetchCategory("br", LexiconKind::kPlaces, wiki.Options());
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_THAT(r->lexicon.entries(), ElementsAre("Brest"));
}

TEST(FetchCategoryTest, MalformedBodyIsDataLoss) {
  MockWiki wiki([](const httplib::Request&, httplib::Response& res) {
    Json(res, "<html>not json</html>");
  });
  auto r = FetchCategory("br", LexiconKind::kPlaces, wiki.Options());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kDataLoss);

  MockWiki shapeless([](const httplib::Request&, httplib::Response& res) {
    Json(res, R"({"batchcomplete":""})");
  });
  EXPECT_EQ(FetchCategory("br", LexiconKind::kPlaces, shapeless.Options())
                .status()
                .code(),
            absl::StatusCode::kDataLoss);
}

TEST(FetchCategoryTest, EmptyCategoryWarns) {
  MockWiki wiki([](const httplib::Request&, httplib::Response& res) {
    Json(res, R"({"query":{"categorymembers":[]}})");
  });
  auto r = FetchCategory("br", LexiconKind::kPlaces, wiki.Options());
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->lexicon.empty());
  ASSERT_EQ(r->warnings.size(), 1u);
  EXPECT_THAT(r->warnings[0], HasSubstr("no members"));
}

TEST(FetchCategoryTest, CacheReplaysWithoutNetwork) {
  testing::TempDir dir;
  CategoryFetchOptions options;
  {
    MockWiki wiki([](const httplib::Request&, httplib::Response& res) {
      Json(res, R"({"query":{"categorymembers":[{"ns":0,"title":"Kemper"}]}})");
    });
    options = wiki.Options();
    options.cache_dir = dir.path().string();
    options.snapshot = "2026-01";
    ASSERT_TRUE(FetchCategory("br", LexiconKind::kPlaces, options).ok());
  }
  // Server is gone; the cached page answers.
  options.max_attempts = 1;
  auto r = FetchCategory("br", LexiconKind::kPlaces, options);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_THAT(r->lexicon.entries(), ElementsAre("Kemper"));
  options.snapshot = "2026-02";
  EXPECT_FALSE(FetchCategory("br", LexiconKind::kPlaces, options).ok());
}

TEST(RateLimiterTest, SpacesRequests) {
  RateLimiter limiter(100.0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.Acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - start,
            std::chrono::milliseconds(45));
}

}  // namespace
}  // namespace xlp
