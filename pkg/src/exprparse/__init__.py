"""生成元の式（rt 記法）の字句解析・構文解析・評価。"""
