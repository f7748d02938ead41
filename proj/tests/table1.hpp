// The worked example triple used across feature tests.
#pragma once

#include <string>

namespace table1 {

inline const std::string kQp = "anxiety medication for drug/alcohol addiction?";
inline const std::string kQt =
    "Is chlordiazepoxide/librium a good medication for alcohol withdrawal and the associated anxiety?";
inline const std::string kAt =
    "chlordiazepoxide has been the standard drug used for rapid alcohol detox for decades and has stood the test "
    "of time. the key word is rapid the drug should really only be given for around a week. starting at 100 mg on "
    "day one and reducing the dose every day to reach zero on day 8. in my experience it deals well with both the "
    "physical and mental symptoms of withdrawal. looking ahead he will still need an alternative management for his "
    "anxiety to replace the alcohol. therapy may help, possibly in a group setting";

}  // namespace table1
