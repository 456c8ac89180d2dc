// Apache License, Version 2.0, refer to LICENSE.txt

// Reference tables for the Lagos Island local government area (20 wards,
// LGA code 25020). WardStatRow mirrors the zonal attribute table produced
// for the 13 wards with published count/sum/mean triples; WardNeedRow is
// the full 20-ward population and toilet-needs table.

#ifndef GRIDPOP_TESTS_LAGOS_FIXTURE_HPP
#define GRIDPOP_TESTS_LAGOS_FIXTURE_HPP

#include <array>

namespace lagos {

struct WardStatRow {
    const char* ward_name;
    double count;
    double sum;
    double mean;
};

inline constexpr std::array<WardStatRow, 13> kWardStats{ {
  { "Idunganran/Idumagbo", 15.0, 2068.40669250, 137.893779500 },
  { "Lafiaji", 39.0, 3130.15750777, 80.2604489173 },
  { "Oke-Arin/Idumota", 28.0, 4090.59648609, 146.092731646 },
  { "Idumoyingbo", 16.0, 2696.71299743, 168.544562339 },
  { "Epetedo West", 24.0, 4371.67865753, 182.153277397 },
  { "Oluwole", 18.0, 2131.16229033, 118.397905018 },
  { "Ilupeji/Ebute Awo", 16.0, 1977.00268554, 123.562667846 },
  { "Alagba/Obadina", 7.0, 1515.25909805, 216.465585436 },
  { "Anikantamo", 8.0, 2122.08061218, 265.260076522 },
  { "Balogun", 11.0, 1586.70269322, 144.245699383 },
  { "Ajele", 8.0, 980.252693176, 122.531586647 },
  { "Araromi Odo", 0.39524700637, 2.40462669649, 6.0838580881 },
  { "Oke-Awo/Agarawu", 8.0, 1866.68389892, 233.335487365 },
} };

struct WardNeedRow {
    const char* ward_name;
    double no_of_persons;
    long long toilets_need;
    long long male_units;
    long long female_units;
};

inline constexpr std::array<WardNeedRow, 20> kWardNeeds{ {
  { "Alagba/Obadina", 1515.259098, 16, 64, 128 },
  { "Anikantamo", 2122.080612, 22, 88, 176 },
  { "Balogun", 1586.702693, 16, 64, 128 },
  { "Ajele", 980.252693, 10, 40, 80 },
  { "Idumoyingbo", 2696.712997, 27, 108, 216 },
  { "Epetedo West", 4371.678658, 44, 176, 352 },
  { "Oluwole", 2131.162290, 22, 88, 176 },
  { "Ilupeji/Ebute Awo", 1977.002686, 20, 80, 160 },
  { "Okepopo East", 5780.848736, 58, 232, 464 },
  { "Odam", 541.776402, 6, 24, 48 },
  { "Okepopo West", 2607.031723, 27, 108, 216 },
  { "Olosun/Ojo Oto", 1348.708896, 14, 56, 112 },
  { "Araromi Odo", 2.404627, 1, 4, 8 },
  { "Oko-Awo/Agarawu", 1866.683899, 19, 76, 152 },
  { "Epetedo East", 3205.831504, 33, 132, 264 },
  { "Oke-Olowogbowo", 1157.845606, 12, 48, 96 },
  { "Isale Gangan", 1825.179672, 19, 76, 152 },
  { "Idunganran/Idumagbo", 2068.406693, 21, 84, 168 },
  { "Lafiaji", 3130.157508, 32, 128, 256 },
  { "Oke-Arin/Idumota", 4090.596466, 41, 164, 328 },
} };

inline constexpr double kLgaTotal = 45006.32;
inline constexpr const char* kHighestPopulationWard = "Okepopo East";
inline constexpr const char* kLowestPopulationWard = "Araromi Odo";

} // namespace lagos

#endif // GRIDPOP_TESTS_LAGOS_FIXTURE_HPP
