// Copyright 2026 The tabaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TABAUG_TESTS_SUPPORT_FIXTURES_H_
#define TABAUG_TESTS_SUPPORT_FIXTURES_H_

#include <string>

#include "tabaug/csv.h"
#include "tabaug/tabular.h"

namespace tabaug::testing {

inline std::string SourcePath(const std::string& rel) {
  return std::string(TABAUG_SOURCE_DIR) + "/" + rel;
}

inline std::string FixturePath(const std::string& rel) {
  return SourcePath("fixtures/" + rel);
}

inline Table SaintsTable() {
  RawTable raw{{"date", "game site", "result/score"},
               {{"2007-9-6", "rca dome", "l 41-10"},
                {"2007-9-16", "raymond james stadium", "l 31-14"},
                {"2007-9-24", "louisiana superdome", "l 31-14"}}};
  return Table::Ingest(raw, "t1", Provenance::kOriginal, "2007 New Orleans Saints season");
}

inline Table TatqaTable() {
  RawTable raw{{"filledcolumnname", "2019", "2018"},
               {{"computer equipment", "137763", "94384"},
                {"furniture and fixtures", "187167", "159648"},
                {"subtotal", "324930", "254032"},
                {"less accumulated depreciation", "148916", "104702"},
                {"property and equipment, net", "176014", "149330"}}};
  return Table::Ingest(raw, "t1");
}

inline Table FinqaTable() {
  RawTable raw{{"period", "total number ofsharespurchased[a]", "averageprice paidpershare",
                "total number of sharespurchased as part of apublicly announcedplan or program [b]",
                "maximum number ofshares that may yetbe purchased under the planor program [b]"},
               {{"oct . 1 through oct . 31", "3087549", "107.59", "3075000", "92618000"},
                {"nov . 1 through nov . 30", "1877330", "119.84", "1875000", "90743000"},
                {"dec . 1 through dec . 31", "2787108", "116.54", "2786400", "87956600"},
                {"total", "7751987", "113.77", "7736400", "n/a"}}};
  return Table::Ingest(raw, "t1");
}

inline const char* kTatqaReport =
    "NOTE 5 - PROPERTY AND EQUIPMENT\n"
    "The Company owned equipment recorded at cost, which consisted of the following as of "
    "December 31, 2019 and 2018:\n"
    "Depreciation expense was $80,206 and $58,423 for the years ended December 31, 2019 and "
    "2018, respectively";

inline const char* kFinqaReport =
    "purchases of equity securities 2013 during 2014 , we repurchased 33035204 shares of our "
    "common stock at an average price of $ 100.24 .\n"
    "[b] effective january 1 , 2014 , our board of directors authorized the repurchase of up to "
    "120 million shares of our common stock by december 31 , 2017 .";

}  // namespace tabaug::testing

#endif  // TABAUG_TESTS_SUPPORT_FIXTURES_H_
