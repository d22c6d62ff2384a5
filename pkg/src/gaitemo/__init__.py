"""Emotion recognition from Kinect gait recordings.

Pipeline: :mod:`~gaitemo.preprocessing` turns a 25-joint :class:`Walk` into
front/back segments, :mod:`~gaitemo.features` reduces them to a Fourier
descriptor, and :mod:`~gaitemo.classify` trains and cross-validates
classifiers on those descriptors.
"""
from .classify import (ClassifierSpec, EvalReport, GaussianNBModel, LabeledDataset,
                       LinearSVMModel, cross_validate, predict, predict_gnb, predict_svm,
                       stratified_kfold, train, train_gnb, train_svm_smo)
from .errors import GaitError
from .features import (FeatureVector, MissingSidePolicy, aggregate_direction, dft,
                       main_frequency_phase, segment_features, walk_features)
from .pipeline import extract_features, features_for_walks
from .preprocessing import (PipelineConfig, detect_heading, differentiate, gaussian_filter,
                            preprocess_walk, recenter_on_spinebase, segment_walk,
                            select_significant_joints)
from .skeleton import (ALL_25, SIGNIFICANT_14, EmotionLabel, Frame, Heading, JointId, JointSet,
                       PoseMatrix, Segment, Stage, Walk, validate_walk)
from .synthgait import CorpusSpec, GaitParams, PathDirection, generate_corpus, generate_walk

__version__ = "0.1.0"
