#!/usr/bin/env python3
"""Regenerate the bundled fixture datasets (deterministic).

data/diabetes.csv: 768 rows shaped like the well-known Pima diabetes
table (8 numeric predictors, binary Outcome). data/titanic.csv: 891 rows
shaped like the Kaggle Titanic table (mixed types, missing Age/Embarked
cells, heavy-tailed Fare). Both are synthetic stand-ins with realistic
marginals and correlations, not the original data.
"""

import csv
import os

import numpy as np

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def make_diabetes(path, n=768, seed=20240101):
    rng = np.random.default_rng(seed)
    age = np.clip(21 + rng.gamma(2.0, 8.5, n), 21, 81).round()
    pregnancies = np.clip(rng.poisson(np.clip((age - 18) / 12.0, 0.1, None)), 0, 15)
    bmi = np.clip(rng.normal(32.0, 6.9, n), 18.2, 67.1).round(1)
    glucose = np.clip(rng.normal(100 + 0.45 * age + 0.8 * (bmi - 32), 26, n), 44, 199).round()
    blood_pressure = np.clip(rng.normal(58 + 0.18 * age + 0.3 * (bmi - 32), 11, n), 24, 122).round()
    skin = np.clip(rng.normal(1.05 * (bmi - 32) + 20.5, 9.5, n), 7, 63).round()
    insulin = np.clip(rng.lognormal(4.0, 0.9, n) * (glucose / 120.0), 14, 846).round()
    pedigree = np.clip(rng.lognormal(-1.0, 0.65, n), 0.078, 2.42).round(3)
    logit = (-23.4 + 0.105 * glucose + 0.07 * bmi + 0.03 * age + 0.9 * pedigree
             + rng.normal(0, 1.3, n))
    outcome = (rng.random(n) < sigmoid(logit)).astype(int)
    header = ["Pregnancies", "Glucose", "BloodPressure", "SkinThickness", "Insulin",
              "BMI", "DiabetesPedigree", "Age", "Outcome"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(n):
            writer.writerow([
                int(pregnancies[i]), int(glucose[i]), int(blood_pressure[i]),
                int(skin[i]), int(insulin[i]), f"{bmi[i]:.1f}", f"{pedigree[i]:.3f}",
                int(age[i]), int(outcome[i]),
            ])


def make_titanic(path, n=891, seed=19120415):
    rng = np.random.default_rng(seed)
    pclass = rng.choice([1, 2, 3], size=n, p=[0.24, 0.21, 0.55])
    sex = rng.choice(["male", "female"], size=n, p=[0.65, 0.35])
    age = np.clip(rng.normal(38 - 4.5 * (pclass - 1), 14, n), 0.42, 80).round(1)
    sibsp = rng.choice([0, 1, 2, 3, 4], size=n, p=[0.68, 0.21, 0.06, 0.03, 0.02])
    parch = rng.choice([0, 1, 2, 3], size=n, p=[0.76, 0.13, 0.08, 0.03])
    base_fare = np.array([84.0, 20.7, 13.7])[pclass - 1]
    fare = np.clip(base_fare * rng.lognormal(0.0, 0.6, n), 4.0, 512.33).round(2)
    embarked = rng.choice(["S", "C", "Q"], size=n, p=[0.72, 0.19, 0.09])
    logit = (1.0 - 0.9 * (pclass - 1) + 2.5 * (sex == "female") - 0.02 * age
             + rng.normal(0, 0.8, n))
    survived = (rng.random(n) < sigmoid(logit)).astype(int)
    age_missing = rng.random(n) < 0.20
    embarked_missing = rng.random(n) < 0.003
    header = ["Pclass", "Sex", "Age", "SibSp", "Parch", "Fare", "Embarked", "Survived"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(n):
            writer.writerow([
                int(pclass[i]), sex[i],
                "" if age_missing[i] else f"{age[i]:.1f}",
                int(sibsp[i]), int(parch[i]), f"{fare[i]:.2f}",
                "" if embarked_missing[i] else embarked[i],
                int(survived[i]),
            ])


if __name__ == "__main__":
    os.makedirs(OUT_DIR, exist_ok=True)
    make_diabetes(os.path.join(OUT_DIR, "diabetes.csv"))
    make_titanic(os.path.join(OUT_DIR, "titanic.csv"))
    print(f"fixtures written to {os.path.abspath(OUT_DIR)}")
