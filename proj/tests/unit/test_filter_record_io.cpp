#include "compcorr/error.hpp"
#include "compcorr/filter.hpp"
#include "compcorr/record_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace compcorr;

namespace {

const CorrValue na = CorrValue::undefined();

CorrValue v(double x)
{
    return CorrValue(x);
}

} // namespace

TEST_SUITE("filter") {

TEST_CASE("parse the two-sided slice")
{
    const auto f = RecordFilter::parse("hcc>0.9 AND abs(pearson)<0.1");
    REQUIRE(f.terms().size() == 2);
    CHECK(f.terms()[0].field == FilterField::hcc);
    CHECK(f.terms()[0].op == FilterOp::greater);
    CHECK(f.terms()[0].threshold == 0.9);
    CHECK(f.terms()[1].field == FilterField::abs_pearson);
    CHECK(f.terms()[1].op == FilterOp::less);
    CHECK(f.accepts(v(0.95), v(0.05), v(-0.3)));
    CHECK(f.accepts(v(0.95), v(-0.05), v(-0.3)));
    CHECK_FALSE(f.accepts(v(0.95), v(-0.15), v(-0.3)));
    CHECK_FALSE(f.accepts(v(0.9), v(0.0), v(-0.3)));
}

TEST_CASE("keywords are case-insensitive and spacing is free")
{
    const auto f = RecordFilter::parse("  HCC >= 0.5 and LCC<=-0.5   And Pearson > -1 ");
    REQUIRE(f.terms().size() == 3);
    CHECK(f.terms()[1].field == FilterField::lcc);
    CHECK(f.terms()[1].op == FilterOp::less_equal);
    CHECK(f.terms()[1].threshold == -0.5);
    CHECK(f.accepts(v(0.5), v(0.0), v(-0.5)));
    CHECK_FALSE(f.accepts(v(0.5), v(0.0), v(-0.4)));
}

TEST_CASE("undefined operands fail their comparison")
{
    const auto f = RecordFilter::parse("lcc < 0");
    CHECK_FALSE(f.accepts(v(0.2), v(0.1), na));
    CHECK(f.accepts(na, na, v(-0.1)));
    CHECK(RecordFilter().accepts(na, na, na));
    CHECK(RecordFilter::parse("").empty());
}

TEST_CASE("round trip through to_string")
{
    const auto f = RecordFilter::parse("hcc>0.9 AND abs(pearson)<0.1 AND lcc<=-0.25");
    const auto g = RecordFilter::parse(f.to_string());
    REQUIRE(g.terms().size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(g.terms()[i].field == f.terms()[i].field);
        CHECK(g.terms()[i].op == f.terms()[i].op);
        CHECK(g.terms()[i].threshold == f.terms()[i].threshold);
    }
}

TEST_CASE("malformed filters")
{
    CHECK_THROWS_AS(RecordFilter::parse("hcc"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("hcc = 0.5"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("bcc > 0.5"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("hcc > 0.5 OR lcc < 0"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("abs(hcc) > 0.5"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("hcc > x"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("hccx > 0.5"), ParseError);
    CHECK_THROWS_AS(RecordFilter::parse("hcc > 1.5"), InvalidArgument);
    CHECK_THROWS_AS(RecordFilter::parse("lcc < -2"), InvalidArgument);
}

}

TEST_SUITE("record_io") {

TEST_CASE("value formatting")
{
    CHECK(format_value(v(0.94493)) == "0.944930");
    CHECK(format_value(v(-1.0)) == "-1.000000");
    CHECK(format_value(na) == "NA");
    CHECK(format_value(v(-1e-9)) == "0.000000");
    CHECK(format_value(v(0.123456789), 3) == "0.123");
    CHECK(format_real(1.25, 2) == "1.25");
}

TEST_CASE("record file layout and read back")
{
    PairRecord a{"A1", "B2", v(0.9928), v(0.9851), v(0.9422), Composition{7, 4, 8, 4}, Composition{23}};
    PairRecord b{"G1", "G2", na, na, na, {}, {}};
    std::ostringstream out;
    RecordWriter w(out);
    w.write(a);
    w.write(b);
    CHECK(w.written() == 2);
    CHECK(out.str() ==
          "id_a\tid_b\thcc\tpearson\tlcc\tbcc\twcc\n"
          "A1\tB2\t0.992800\t0.985100\t0.942200\t[7,4,8,4]\t[23]\n"
          "G1\tG2\tNA\tNA\tNA\tNA\tNA\n");

    std::istringstream in(out.str());
    const auto back = read_records(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id_a == "A1");
    CHECK(*back[0].hcc == 0.9928);
    CHECK(back[0].bcc == a.bcc);
    CHECK(back[0].wcc == a.wcc);
    CHECK_FALSE(back[1].pearson.defined());
    CHECK(back[1].bcc.empty());

    std::istringstream bad("header\nA\tB\t0.1\n");
    CHECK_THROWS_AS(read_records(bad), ParseError);
}

TEST_CASE("distribution and cloud files")
{
    std::ostringstream d;
    DistributionWriter dw(d, 4);
    const std::vector<std::size_t> parts{2, 2, 15};
    dw.write(parts, v(0.5));
    dw.write(parts, na);
    CHECK(d.str() == "composition\tr_c\n[2,2,15]\t0.5000\n[2,2,15]\tNA\n");

    std::ostringstream c;
    CloudWriter cw(c);
    cw.write({v(-0.25), 1.5, 2.0, -0.375});
    CHECK(c.str() == "r_c\tvar_a\tvar_b\tcov\n-0.250000\t1.500000\t2.000000\t-0.375000\n");
}

TEST_CASE("distribution file name")
{
    CHECK(distribution_file_name("cdc", "G7", "G9", 23, 2) == "Output.cdc.G7.G9.n23.m2.txt");
}

}
