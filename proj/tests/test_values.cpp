#include <catch2/catch_amalgamated.hpp>

#include "anonet/anonet.hpp"

using namespace anonet;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rat("3/4") == Rat(3, 4));
    CHECK(parse_rat("-6/4") == Rat(-3, 2));
    CHECK(parse_rat("17") == Rat(17));
    CHECK(rat_str(Rat(3, 4)) == "3/4");
    CHECK(rat_str(Rat(5)) == "5");
    CHECK_THROWS_AS(parse_rat("a/b"), ValidationError);
    CHECK_THROWS_AS(parse_rat(""), ValidationError);
    CHECK(rat_floor(Rat(-3, 2)) == -2);
    CHECK(rat_floor(Rat(3, 2)) == 1);
    CHECK(rat_abs(Rat(-7, 3)) == Rat(7, 3));
}

TEST_CASE("values order rationals before tokens") {
    Value two = val(2);
    Value half = Value::rational(Rat(1, 2));
    Value a = Value::token("a");
    Value b = Value::token("b");
    CHECK(half < two);
    CHECK(two < a);
    CHECK(a < b);
    CHECK(Value::parse("3/2") == Value::rational(Rat(3, 2)));
    CHECK(Value::parse("node") == Value::token("node"));
    CHECK(a.str() == "a");
    CHECK(two.str() == "2");
}

TEST_CASE("datum variants and ordering") {
    Datum unit;
    CHECK(unit.is_unit());
    Datum i(42);
    CHECK(i.is_int());
    CHECK(i.as_int() == 42);
    Datum r(Rat(1, 3));
    CHECK(r.is_rat());
    Datum d(0.5);
    CHECK(d.is_real());
    Datum s("hello");
    CHECK(s.is_text());
    Datum l(Datum::List{Datum(1), Datum(Rat(1, 2)), Datum("x")});
    CHECK(l.is_list());
    CHECK(l.as_list().size() == 3);

    Datum v = Datum::of_value(Value::token("tok"));
    CHECK(v.as_value() == Value::token("tok"));
    Datum v2 = Datum::of_value(val(7));
    CHECK(v2.as_value() == val(7));

    CHECK(Datum(1) == Datum(1));
    CHECK(Datum(1) != Datum(2));
    CHECK(l.text() == l.text());
    CHECK(Datum(1).hash() == Datum(1).hash());

    std::vector<Datum> msgs{l, i, unit, s};
    std::sort(msgs.begin(), msgs.end());
    CHECK(std::is_sorted(msgs.begin(), msgs.end()));
}

TEST_CASE("output distances and equality") {
    Output a(Rat(1, 2));
    Output b(Rat(3, 4));
    CHECK(a.distance(b, Metric::Euclidean) == Rat(1, 4));
    CHECK(a.distance(b, Metric::Discrete) == Rat(1));
    CHECK(a.within(b, Metric::Euclidean, Rat(1, 4)));
    CHECK_FALSE(a.within(b, Metric::Euclidean, Rat(1, 5)));
    CHECK(a.within(a, Metric::Discrete, Rat(0)));

    Output nr = Output::not_ready();
    CHECK(nr.is_not_ready());
    CHECK_FALSE(nr.within(a, Metric::Euclidean, Rat(1)));

    FrequencyFunction f1, f2;
    f1.nu[Value::token("a")] = Rat(1, 2);
    f1.nu[Value::token("b")] = Rat(1, 2);
    f2.nu[Value::token("a")] = Rat(1, 3);
    f2.nu[Value::token("b")] = Rat(2, 3);
    Output of1(f1), of2(f2);
    // squared euclidean distance: 2 * (1/6)^2 = 1/18
    CHECK(of1.distance(of2, Metric::Euclidean) == Rat(1, 18));
    CHECK(of1.within(of2, Metric::Euclidean, Rat(1, 4)));  // 1/18 <= 1/16
    CHECK_FALSE(of1.within(of2, Metric::Euclidean, Rat(1, 5)));

    Output set_out(ValueSet{val(1), val(2)});
    CHECK(set_out.distance(a, Metric::Euclidean) == std::nullopt);
    CHECK(set_out.str().find('{') != std::string::npos);
}

TEST_CASE("frequency function from a vector") {
    std::vector<Value> xs{Value::token("a"), Value::token("a"), Value::token("b")};
    FrequencyFunction f = frequency_of(xs);
    CHECK(f.at(Value::token("a")) == Rat(2, 3));
    CHECK(f.at(Value::token("b")) == Rat(1, 3));
    CHECK(f.at(Value::token("c")) == Rat(0));
    CHECK(f.is_probability());
    CHECK_THROWS_AS(frequency_of(std::vector<Value>{}), ValidationError);
}

TEST_CASE("canonical vector is the shortest realization") {
    FrequencyFunction f;
    f.nu[Value::token("a")] = Rat(1, 2);
    f.nu[Value::token("b")] = Rat(1, 3);
    f.nu[Value::token("c")] = Rat(1, 6);
    std::vector<Value> v = canonical_vector(f);
    REQUIRE(v.size() == 6);
    CHECK(frequency_of(v) == f);
    CHECK(std::is_sorted(v.begin(), v.end()));

    FrequencyFunction bogus;
    bogus.nu[Value::token("a")] = Rat(1, 2);
    CHECK_THROWS_AS(canonical_vector(bogus), ValidationError);
}

TEST_CASE("frequency equivalence ignores multiplicity scale") {
    std::vector<Value> a{Value::token("a"), Value::token("b")};
    std::vector<Value> b{Value::token("a"), Value::token("a"), Value::token("b"), Value::token("b")};
    std::vector<Value> c{Value::token("a"), Value::token("a"), Value::token("b")};
    CHECK(equivalent_in_frequency(a, b));
    CHECK_FALSE(equivalent_in_frequency(a, c));
}

TEST_CASE("quot-sum of value weight pairs") {
    std::vector<std::pair<Rat, Rat>> pairs{{Rat(1), Rat(1)}, {Rat(2), Rat(1)}, {Rat(4), Rat(2)}};
    CHECK(quot_sum(pairs) == Rat(7, 4));
    std::vector<std::pair<Rat, Rat>> zero{{Rat(1), Rat(1)}, {Rat(2), Rat(-1)}};
    CHECK_THROWS_AS(quot_sum(zero), ValidationError);
}

TEST_CASE("bounded-denominator grid") {
    const std::vector<Rat>& q3 = qn_set(3);
    std::vector<Rat> expect{Rat(0), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(1)};
    CHECK(q3 == expect);
    CHECK_THROWS_AS(qn_set(0), ValidationError);

    CHECK(nearest_in_qn(Rat(49, 100), 3) == Rat(1, 2));
    CHECK(nearest_in_qn(Rat(1, 100), 3) == Rat(0));
    CHECK(nearest_in_qn(Rat(99, 100), 3) == Rat(1));
    CHECK(nearest_in_qn(Rat(-5), 3) == Rat(0));
    CHECK(nearest_in_qn(Rat(7), 3) == Rat(1));
    CHECK(nearest_in_qn(Rat(1, 3), 3) == Rat(1, 3));
    // exact midpoint of 1/3 and 1/2 resolves to the smaller grid point
    CHECK(nearest_in_qn(Rat(5, 12), 3) == Rat(1, 3));
}

TEST_CASE("real parameters: exact, square roots, comparisons") {
    RealParam p = RealParam::exact(Rat(2, 3));
    CHECK_FALSE(p.irrational());
    CHECK(p.rational_value() == Rat(2, 3));
    CHECK(p.compare(Rat(2, 3)) == 0);
    CHECK(p.compare(Rat(1)) == 1);
    CHECK(p.compare(Rat(0)) == -1);

    CHECK_FALSE(RealParam::root(Rat(4)).irrational());
    CHECK(RealParam::root(Rat(4)).rational_value() == Rat(2));
    CHECK(RealParam::root(Rat(9, 4)).rational_value() == Rat(3, 2));

    RealParam s = RealParam::parse("sqrt2/2");
    CHECK(s.irrational());
    CHECK(s.compare(Rat(7071, 10000)) == -1);  // 0.7071 < sqrt(2)/2
    CHECK(s.compare(Rat(7072, 10000)) == 1);   // 0.7072 > sqrt(2)/2
    auto [lo, hi] = s.enclosure(12);
    CHECK(lo < hi);
    CHECK(hi - lo <= Rat(1, 2) * Rat(1, Int(1000000000000)));
    CHECK_THROWS_AS(RealParam::root(Rat(-1)), ValidationError);
    CHECK(RealParam::parse("sqrt9").rational_value() == Rat(3));
    CHECK(RealParam::parse("3/7").rational_value() == Rat(3, 7));
}

TEST_CASE("target function catalogue") {
    std::vector<Value> xs{val(1), val(2), val(4)};
    CHECK(eval_on_vector(make_max(), xs) == Output(val(4)));
    CHECK(eval_on_vector(make_min(), xs) == Output(val(1)));
    CHECK(eval_on_vector(make_average(), xs) == Output(Rat(7, 3)));
    CHECK(eval_on_vector(make_sum(), xs) == Output(Rat(7)));

    std::vector<Value> toks{Value::token("a"), Value::token("b"), Value::token("b")};
    Output set_out = eval_on_vector(make_set(), toks);
    REQUIRE(set_out.is_set());
    CHECK(set_out.set() == ValueSet{Value::token("a"), Value::token("b")});

    Output freq_out = eval_on_vector(make_frequency(), toks);
    REQUIRE(freq_out.is_frequency());
    CHECK(freq_out.frequency().at(Value::token("b")) == Rat(2, 3));

    Output ms_out = eval_on_vector(make_multiset(), toks);
    REQUIRE(ms_out.is_multiset());
    CHECK(ms_out.multiset() == ValueMultiset{{Value::token("a"), 1}, {Value::token("b"), 2}});

    CHECK(eval_on_vector(make_multiplicity(Value::token("b")), toks) == Output(Rat(2)));
    CHECK(eval_on_vector(make_multiplicity(Value::token("z")), toks) == Output(Rat(0)));

    // nu(a) = 1/3 meets the threshold 1/3 exactly; 1/4 misses it
    TargetFunction th = make_threshold(Value::token("a"), RealParam::exact(Rat(1, 3)));
    CHECK(eval_on_vector(th, toks) == Output(Rat(1)));
    std::vector<Value> longer{Value::token("a"), Value::token("b"), Value::token("b"),
                              Value::token("b")};
    CHECK(eval_on_vector(th, longer) == Output(Rat(0)));

    CHECK(make_max().cls == FunctionClass::SetBased);
    CHECK(make_average().cls == FunctionClass::FrequencyBased);
    CHECK(make_sum().cls == FunctionClass::MultisetBased);
    CHECK_THROWS_AS(eval_on_vector(make_max(), std::vector<Value>{}), ValidationError);
}

TEST_CASE("target function parsing") {
    CHECK(parse_target("average").name == "average");
    CHECK(parse_target("max").cls == FunctionClass::SetBased);
    TargetFunction th = parse_target("threshold:omega=a,r=1/3");
    std::vector<Value> toks{Value::token("a"), Value::token("a"), Value::token("b")};
    CHECK(eval_on_vector(th, toks) == Output(Rat(1)));
    TargetFunction mult = parse_target("multiplicity:omega=7");
    std::vector<Value> nums{val(7), val(7), val(1)};
    CHECK(eval_on_vector(mult, nums) == Output(Rat(2)));
    CHECK_THROWS_AS(parse_target("no-such-function"), ValidationError);
    CHECK_THROWS_AS(parse_target("threshold:omega=a"), ValidationError);
}
