# %% [markdown]
# # Fourteen joints versus all twenty-five
#
# The extra joints of the full skeleton (head, hands, feet, spine points) are
# the ones Kinect tracks worst. This corpus adds heavy independent jitter to the
# extremities only, so feeding them to the classifier costs accuracy.
#
# The same comparison is available on the command line:
#
#     gaitemo synth --params src/gaitemo/data/ablation_params.json --out /tmp/abl
#     gaitemo ablate --manifest /tmp/abl/manifest.csv --seed 7

# %%
from pathlib import Path

import gaitemo
from gaitemo import ClassifierSpec, JointSet, PipelineConfig, cross_validate
from gaitemo.classify import format_table
from gaitemo.pipeline import features_for_walks
from gaitemo.synthgait import generate_walks, load_corpus_spec

spec = load_corpus_spec(Path(gaitemo.__file__).parent / "data" / "ablation_params.json")
walks = generate_walks(spec)

# %%
reports, names = [], []
for joints in (JointSet.SIGNIFICANT14, JointSet.ALL25):
    data, _ = features_for_walks(walks, PipelineConfig(joint_set=joints))
    reports.append(cross_validate(data, ClassifierSpec("gnb"), k=10, seed=7))
    names.append(f"{len(joints.joints)} joints ({data.width} features)")
print(format_table(reports, names, header="Joints"))
