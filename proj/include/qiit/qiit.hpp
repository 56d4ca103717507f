// Copyright 2026 The qiit-elab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "qiit/core.hpp"
#include "qiit/elaborate.hpp"
#include "qiit/emit.hpp"
#include "qiit/error.hpp"
#include "qiit/otl.hpp"
#include "qiit/otl_check.hpp"
#include "qiit/otl_print.hpp"
#include "qiit/selftest.hpp"
#include "qiit/signature.hpp"
#include "qiit/surface.hpp"
#include "qiit/termmodel.hpp"
#include "qiit/translate.hpp"
#include "qiit/translate_models.hpp"
