"""受け入れスイート（理論上の主張の機械的な検査）と乱数の塔。"""
