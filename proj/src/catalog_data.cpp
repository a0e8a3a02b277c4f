#include "bma/catalog.hpp"

namespace bma {

// Subfield-specific t and inverse-gamma priors for 46 Cochrane review group
// topics plus the pooled estimate. Layout is versioned by the first row.
std::string_view embedded_catalog_text() {
  static constexpr std::string_view kText = R"csv(schema_version,1
topic,comparisons,studies,t_location,t_scale,t_df,invgamma_shape,invgamma_scale
Acute Respiratory Infections,6,104,0,0.38,5,1.73,0.46
Airways,46,815,0,0.38,6,2.02,0.28
Anaesthesia,44,661,0,0.55,4,1.62,0.64
Back and Neck,13,278,0,0.37,5,1.75,0.57
"Bone, Joint and Muscle Trauma",32,1221,0,0.40,5,1.52,0.28
Colorectal,13,372,0,0.51,5,1.64,0.56
Common Mental Disorders,17,264,0,0.55,5,1.62,0.45
Consumers and Communication,6,72,0,0.40,5,1.56,0.14
Cystic Fibrosis and Genetic Disorders,1,12,0,0.47,5,1.70,0.45
Dementia and Cognitive Improvement,9,197,0,0.45,5,1.71,0.44
"Developmental, Psychosocial and Learning Problems",20,407,0,0.18,5,1.43,0.12
Drugs and Alcohol,8,170,0,0.33,5,1.89,0.28
Effective Practice and Organisation of Care,10,204,0,0.39,5,1.71,0.35
Emergency and Critical Care,9,214,0,0.39,5,1.62,0.29
ENT,17,273,0,0.43,5,1.85,0.48
Eyes and Vision,14,347,0,0.40,6,1.86,0.41
"Gynaecological, Neuro-oncology and Orphan Cancer",1,10,0,0.45,5,1.67,0.46
Gynaecology and Fertility,14,253,0,0.38,5,1.78,0.46
Heart,88,2112,0,0.42,5,1.83,0.47
Hepato-Biliary,34,1103,0,0.60,4,1.56,0.58
HIV/AIDS,2,23,0,0.43,5,1.73,0.44
Hypertension,27,524,0,0.48,3,2.01,0.38
Incontinence,17,219,0,0.33,6,1.64,0.36
Infectious Diseases,8,150,0,0.59,2,1.28,0.44
Inflammatory Bowel Disease,1,12,0,0.40,5,1.76,0.39
Injuries,3,54,0,0.35,5,1.80,0.34
Kidney and Transplant,39,767,0,0.54,5,1.72,0.53
Metabolic and Endocrine Disorders,25,503,0,0.43,5,1.71,0.37
Methodology,5,106,0,0.49,5,1.72,0.51
Movement Disorders,5,70,0,0.42,5,1.88,0.33
Musculoskeletal,32,778,0,0.45,6,1.87,0.38
Neonatal,11,259,0,0.42,5,1.68,0.38
Oral Health,10,236,0,0.51,5,1.79,0.28
"Pain, Palliative and Supportive Care",16,283,0,0.43,5,1.69,0.42
Pregnancy and Childbirth,32,539,0,0.33,5,1.86,0.32
Public Health,2,22,0,0.33,5,1.76,0.23
Schizophrenia,21,436,0,0.29,4,1.60,0.27
Sexually Transmitted Infections,9,113,0,0.42,5,1.70,0.59
Skin,6,85,0,0.48,5,1.64,0.51
Stroke,21,357,0,0.48,5,1.71,0.40
Tobacco Addiction,4,44,0,0.44,4,1.73,0.42
Upper GI and Pancreatic Diseases,1,12,0,0.45,5,1.76,0.38
Urology,2,33,0,0.44,5,1.73,0.45
Vascular,3,35,0,0.46,5,1.66,0.50
Work,2,24,0,0.42,5,1.76,0.39
Wounds,7,103,0,0.56,5,1.54,0.41
Pooled estimate,713,14876,0,0.43,5,1.71,0.40
)csv";
  return kText;
}

}  // namespace bma
