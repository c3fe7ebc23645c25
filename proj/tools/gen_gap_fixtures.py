#!/usr/bin/env python3
# Copyright 2026 The apecheck Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes fixtures/gap01.ape .. gap10.ape.

Each app has three injected faults: two that only fire under a particular
environment or input (settings, permissions, injected faults, exact text),
and one stale-dialog dismiss a few screens deep, behind decoy widgets.
"""

import pathlib

# (guard opener, guard closer) pairs around a background statement.
ENV_GUARDS = [
    ("envif not wifi-enabled", "end"),
    ("envif permission-granted CAMERA", "end"),
    ("envif not storage-available", "end"),
    ("try\n    catch io-available", "end"),
    ("envif permission-granted LOCATION", "end"),
]

FAULTS = [
    "create toast.show",
    "access view.setText status0",
]


def gap_app(i: int) -> str:
    depth = 2 + i % 2  # screens before the deep fault
    decoys = 4 + i % 3
    g1 = ENV_GUARDS[i % len(ENV_GUARDS)]
    g2 = ENV_GUARDS[(i + 2) % len(ENV_GUARDS)]
    secret = f"open-sesame-{i}"
    out = [f"# Injected-fault app {i}.", f"app Gap{i:02d}", "entry Screen0", ""]
    binds = []
    for s in range(depth + 1):
        out.append(f"activity Screen{s}")
        out.append(f"  gui status{s} view")
        if s == depth:
            out.append("  gui progress dialog")
        out += ["  lifecycle onCreate", "  end"]
        for d in range(decoys):
            out += [f"  handler onDecoy{d}", f"    access view.setText status{s}", "  end"]
            binds.append(f"bind s{s}decoy{d} Screen{s}.onDecoy{d} click code")
        if s < depth:
            out += ["  handler onNext", f"    startactivity Screen{s + 1}", "  end"]
            binds.append(f"bind s{s}next Screen{s}.onNext click code")
        else:
            out += ["  handler onGo", "    create dialog.create progress", "    start Download", "  end"]
            binds.append(f"bind s{s}go Screen{s}.onGo click code")
        if s == 0:
            out += ["  handler onSync", "    start Sync", "  end"]
            binds.append(f"bind s0sync Screen0.onSync click code")
            out += ["  handler onCode",
                    f"    envif input-matches s0code equals {secret}",
                    "      start Unlock",
                    "    end",
                    "  end"]
            binds.append(f"bind s0code Screen0.onCode input code")
        out += ["end", ""]
    out += ["async Sync task", "  callback background",
            f"    {g1[0]}", f"      {FAULTS[i % 2]}", f"    {g1[1]}",
            "  end", "  callback postExecute", "  end", "end", ""]
    out += ["async Unlock thread", "  callback background",
            f"    {g2[0]}" if i % 3 == 0 else "    call refresh",
            ]
    if i % 3 == 0:
        out += [f"      {FAULTS[(i + 1) % 2]}", f"    {g2[1]}"]
    out += ["  end"]
    if i % 3 != 0:
        out += ["  method refresh", f"    {FAULTS[(i + 1) % 2]}", "  end"]
    out += ["end", ""]
    out += ["async Download task", "  callback background", "  end", "  callback postExecute",
            "    access dialog.dismiss progress", "  end", "end", ""]
    out += binds
    return "\n".join(out) + "\n"


def main() -> None:
    root = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    for i in range(1, 11):
        (root / f"gap{i:02d}.ape").write_text(gap_app(i))


if __name__ == "__main__":
    main()
