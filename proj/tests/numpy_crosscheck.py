# Copyright 2026 The cvfield Authors
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy of
# the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.

"""Drives the CLI end to end and checks the exported tensors with numpy.

Usage: numpy_crosscheck.py <cvfield binary> <scratch dir>
Exits 77 (skipped) when numpy is unavailable.
"""

import json
import pathlib
import shutil
import subprocess
import sys

try:
    import numpy as np
except ImportError:
    print("numpy not available, skipping")
    sys.exit(77)


def run(binary, *args):
    subprocess.run([binary, *map(str, args)], check=True)


def read_mono_y4m(path):
    data = path.read_bytes()
    header, _, rest = data.partition(b"\n")
    tokens = header.split()
    assert tokens[0] == b"YUV4MPEG2"
    width = int(next(t[1:] for t in tokens if t.startswith(b"W")))
    height = int(next(t[1:] for t in tokens if t.startswith(b"H")))
    assert b"Cmono" in tokens
    frames = []
    while rest:
        marker, _, rest = rest.partition(b"\n")
        assert marker.startswith(b"FRAME")
        frames.append(np.frombuffer(rest[: width * height], np.uint8).reshape(height, width))
        rest = rest[width * height :]
    return frames


def read_ppm(path):
    data = path.read_bytes()
    magic, dims, maxval, raster = data.split(b"\n", 3)
    w, h = map(int, dims.split())
    assert magic == b"P6" and maxval == b"255"
    return np.frombuffer(raster, np.uint8).reshape(h, w, 3)


def main():
    binary, scratch = sys.argv[1], pathlib.Path(sys.argv[2])
    shutil.rmtree(scratch, ignore_errors=True)
    scratch.mkdir(parents=True)

    spec = {
        "width": 48,
        "height": 40,
        "channels": 1,
        "frame_count": 20,
        "background": {"kind": "noise", "seed": 4},
        "objects": [
            {"height": 16, "width": 14, "row": 5, "col": 3, "vr": 1, "vc": 2,
             "fill": {"kind": "noise", "seed": 8}},
            {"height": 9, "width": 20, "row": 24, "col": 30, "vr": 0, "vc": -1,
             "fill": {"kind": "checker", "color": 200, "cell": 3}},
        ],
    }
    (scratch / "scene.json").write_text(json.dumps(spec))
    run(binary, "synth", "--spec", scratch / "scene.json", "--out", scratch / "in.y4m")
    run(binary, "encode", scratch / "in.y4m", scratch / "v.cvb", "--block-size", "8", "--gop", "12")
    run(binary, "decode", scratch / "v.cvb", scratch / "back.y4m")
    run(binary, "extract", scratch / "v.cvb", "--out-dir", scratch / "npy")
    run(binary, "viz", scratch / "v.cvb", "--out-dir", scratch / "ppm")

    frames = read_mono_y4m(scratch / "in.y4m")
    decoded = read_mono_y4m(scratch / "back.y4m")
    assert len(frames) == 20 and all((a == b).all() for a, b in zip(frames, decoded))

    rows, cols = np.mgrid[0:40, 0:48]
    for t, frame in enumerate(frames):
        mv = np.load(scratch / "npy" / f"mv_{t:06d}.npy")
        res = np.load(scratch / "npy" / f"res_{t:06d}.npy")
        assert mv.dtype == np.dtype("<i2") and mv.shape == (40, 48, 2), (mv.dtype, mv.shape)
        assert res.dtype == np.dtype("<i2") and res.shape == (40, 48, 1), (res.dtype, res.shape)
        iframe = frames[t - t % 12]
        src_r = rows - mv[..., 0]
        src_c = cols - mv[..., 1]
        assert src_r.min() >= 0 and src_r.max() < 40 and src_c.min() >= 0 and src_c.max() < 48
        rebuilt = np.clip(iframe[src_r, src_c].astype(np.int32) + res[..., 0], 0, 255)
        assert (rebuilt == frame).all(), f"frame {t} does not rebuild from I-frame + D + R"

        res_img = read_ppm(scratch / "ppm" / f"res_{t:06d}.ppm")
        assert (res_img == np.abs(res).astype(np.uint8).repeat(3, axis=2)).all()
        mv_img = read_ppm(scratch / "ppm" / f"mv_{t:06d}.ppm")
        assert mv_img.shape == (40, 48, 3)
        if t % 12 == 0:
            assert (mv_img == 255).all()
    print("numpy crosscheck: 20 frames rebuilt from exported tensors")


if __name__ == "__main__":
    main()
