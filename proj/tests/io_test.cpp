#include <gtest/gtest.h>

#include "support.hpp"
#include "uli/io.hpp"

namespace {

using namespace uli;
using namespace uli::testing;

TEST(JsonRationals, WireFormat)
{
    EXPECT_EQ(to_json(r(1, 2)), Json("1/2"));
    EXPECT_EQ(to_json(Rational(3)), Json("3"));
    EXPECT_EQ(to_json(r(-2, 4)), Json("-1/2"));
    EXPECT_EQ(rational_from_json(Json("3/6")), r(1, 2));
    EXPECT_EQ(rational_from_json(Json(2)), 2);
    EXPECT_THROW(rational_from_json(Json(0.5)), Error);
    EXPECT_THROW(rational_from_json(Json("1/0")), Error);
}

TEST(JsonFunctions, ParsesDocumentedForms)
{
    const auto product = function_from_json(Json::parse(R"({"class":"product","x":["1/2","1/2"]})"));
    EXPECT_EQ(product.kind(), FunctionClass::Product);
    EXPECT_EQ(product(StateDescription(1, {1, 2})), r(1, 4));

    const auto y = function_from_json(Json::parse(R"({"class":"symmetrized","q":2,"c":[0,1,0,0]})"));
    EXPECT_EQ(y(StateDescription(2, {2})), r(1, 2));

    const auto n = function_from_json(
        Json::parse(R"({"class":"nabla","q":2,"upsilon":{"nu":2,"rows":[{"bits":"11","mult":1},{"bits":"00"}]}})"));
    EXPECT_EQ(n(StateDescription(2, {1})), r(1, 4));
}

TEST(JsonFunctions, RoundTripEveryClass)
{
    Rng rng(kSeed);
    const std::vector<ProbabilityFunction> fs{
        product_function(random_point(rng, 2)),
        symmetrized(random_point(rng, 2)),
        mixture({{r(1, 3), product_function(random_point(rng, 2))}, {r(2, 3), symmetrized(random_point(rng, 2))}}),
        nabla(random_upsilon(rng, 4), 2),
        nabla_no_replacement(random_upsilon(rng, 4), 2),
        restrict(symmetrized(random_point(rng, 3)), 2),
        table_function(1, {{{1}, r(1, 3)}, {{2}, r(2, 3)}, {{1, 2}, r(1, 7)}}),
    };
    for (const auto& w : fs) {
        const auto doc = to_json(w);
        const auto back = function_from_json(Json::parse(doc.dump()));
        EXPECT_EQ(back.kind(), w.kind());
        EXPECT_EQ(to_json(back), doc);
        EXPECT_TRUE(agree(back, w, 2));
    }
}

TEST(JsonFunctions, Errors)
{
    const auto kind_of = [](const char* text) {
        try {
            function_from_json(Json::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Internal;
    };
    EXPECT_EQ(kind_of(R"([])"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"gaussian"})"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"product"})"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"product","x":[0.5,0.5]})"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"product","x":["1/2","1/3"]})"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"product","q":2,"x":["1/2","1/2"]})"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"mixture","parts":{}})"), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"nabla","q":2,"upsilon":{"nu":2,"rows":[{"bits":"1x"},{"bits":"00"}]}})"),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"nabla","q":2,"upsilon":{"nu":2,"rows":[{"bits":"11"}]}})"),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"nabla","q":2,"replacement":"no","upsilon":{"nu":1,"rows":[{"bits":"1"}]}})"),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of(R"({"class":"table","q":1,"values":[{"sd":[1.5],"value":"1"}]})"), ErrorKind::InvalidArgument);
}

TEST(JsonMeasures, RoundTrip)
{
    const DiscreteMeasure rho({{r(1, 4), r(1, 3)}, {r(4, 5), r(2, 3)}});
    const auto doc = to_json(rho);
    EXPECT_EQ(doc.dump(), R"([{"x":"1/4","w":"1/3"},{"x":"4/5","w":"2/3"}])");
    EXPECT_EQ(to_json(measure_from_json(doc)), doc);
    EXPECT_THROW(measure_from_json(Json::parse(R"([{"x":"1/2","w":"1/2"}])")), Error);
    EXPECT_THROW(measure_from_json(Json::parse(R"({"x":"1/2","w":"1"})")), Error);
}

TEST(JsonReports, CheckReportShape)
{
    const auto report = check_ip(symmetrized(SimplexPoint(rv({0, 1, 0, 0}))), 3);
    EXPECT_EQ(to_json(report).dump(),
              R"({"principle":"IP","bound":3,"outcome":"fail","witness":{"theta":[2],"phi":[2],"lhs":"1/2","rhs":"1/4"}})");
    const auto pass = check_px(symmetrized(SimplexPoint(rv({0, 1, 0, 0}))), 3);
    EXPECT_EQ(to_json(pass).dump(), R"({"principle":"Px","bound":3,"outcome":"pass"})");
}

TEST(JsonReports, DecompositionShape)
{
    const auto doc = to_json(decompose_y(SimplexPoint(rv({0, 1, 0, 0})), 2));
    EXPECT_EQ(doc["lambda"], "1");
    EXPECT_EQ(doc["g"], 1);
    EXPECT_EQ(doc["nu"], 2);
    EXPECT_EQ(doc["b"].dump(), R"(["-1","4","-1"])");
    EXPECT_EQ(doc["verification"].dump(), R"({"n":2,"state_descriptions":20,"outcome":"pass"})");
    EXPECT_EQ(doc["w1"]["class"], "nabla");
    EXPECT_EQ(doc["w2"]["class"], "mixture");
    const auto w1 = function_from_json(doc["w1"]);
    const auto w2 = function_from_json(doc["w2"]);
    const auto y = symmetrized(SimplexPoint(rv({0, 1, 0, 0})));
    for_all_sds(2, 3, [&](const StateDescription& sd) { EXPECT_EQ(y(sd), 2 * w1(sd) - w2(sd)); });
}

TEST(JsonReports, ErrorShape)
{
    EXPECT_EQ(to_json(Error(ErrorKind::NotPx, "boom")).dump(), R"({"error":{"kind":"not_px","message":"boom"}})");
}

} // namespace
