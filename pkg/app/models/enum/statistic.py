from enum import Enum


class Statistic(str, Enum):
    T_DF = "t_df"
    T_LM = "t_lm"
