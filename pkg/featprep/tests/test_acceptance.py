"""Secondary acceptance: emitted files load through the engine's reader
with zero invariant violations; TVSum conversion yields 20 annotator rows;
the feature width is the backbone's penultimate-layer width."""

import numpy as np
import pytest

from featprep.convert import convert_tvsum
from featprep.extract import extract_directory
from featprep.fvs import read_sidecar

vsumrl_dataio = pytest.importorskip(
    "vsumrl.dataio", reason="engine package needed to validate outputs")


def test_outputs_load_through_engine_dataio(tmp_path, video_dir, backbone):
    data_dir = tmp_path / "data"
    paths = extract_directory(video_dir, data_dir, backbone=backbone)
    assert len(paths) >= 3

    # TVSum-style annotations for every extracted video (20 annotators)
    rng = np.random.default_rng(0)
    lines = []
    for p in paths:
        meta = read_sidecar(data_dir / f"{p.stem}.json")
        for _ in range(20):
            scores = rng.integers(1, 6, size=meta["n_frames_original"])
            lines.append(f"{p.stem}\ttest\t{','.join(map(str, scores))}")
    tsv = tmp_path / "anno.tsv"
    tsv.write_text("\n".join(lines) + "\n")
    converted = convert_tvsum(tsv, data_dir)
    assert sorted(converted) == sorted(p.stem for p in paths)

    for p in paths:
        record = vsumrl_dataio.load_video(p)  # validates every invariant
        assert record.feature_dim == backbone.width
        assert record.user_summaries.shape == (20, record.n_frames_original)
    print(f"\n[acceptance] featprep: {len(paths)} videos extracted, "
          f"converted, and validated by the engine (width {backbone.width})")
