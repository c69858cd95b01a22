"""Symmetric quadrature tables for the reference tetrahedron.

Generated by tools/generate_tet_rules.py; do not edit by hand.
Nodes are barycentric 4-tuples; weights sum to one, so they
are multiplied by the target tetrahedron volume on use.
"""

TET_TABLES = {
    4: (
        [
            [4.54496295874350142e-01, 4.54496295874350142e-01, 4.55037041256498437e-02, 4.55037041256498437e-02],
            [4.54496295874350142e-01, 4.55037041256498437e-02, 4.54496295874350142e-01, 4.55037041256498437e-02],
            [4.55037041256498437e-02, 4.54496295874350142e-01, 4.54496295874350142e-01, 4.55037041256498437e-02],
            [3.10885919263300614e-01, 3.10885919263300614e-01, 3.10885919263300614e-01, 6.73422422100982132e-02],
            [7.21794249067326144e-01, 9.27352503108912624e-02, 9.27352503108912624e-02, 9.27352503108912624e-02],
            [9.27352503108912624e-02, 7.21794249067326144e-01, 9.27352503108912624e-02, 9.27352503108912624e-02],
            [9.27352503108912624e-02, 9.27352503108912624e-02, 7.21794249067326144e-01, 9.27352503108912624e-02],
            [3.10885919263300614e-01, 3.10885919263300614e-01, 6.73422422100982132e-02, 3.10885919263300614e-01],
            [3.10885919263300614e-01, 6.73422422100982132e-02, 3.10885919263300614e-01, 3.10885919263300614e-01],
            [6.73422422100982132e-02, 3.10885919263300614e-01, 3.10885919263300614e-01, 3.10885919263300614e-01],
            [4.54496295874350142e-01, 4.55037041256498437e-02, 4.55037041256498437e-02, 4.54496295874350142e-01],
            [4.55037041256498437e-02, 4.54496295874350142e-01, 4.55037041256498437e-02, 4.54496295874350142e-01],
            [4.55037041256498437e-02, 4.55037041256498437e-02, 4.54496295874350142e-01, 4.54496295874350142e-01],
            [9.27352503108912624e-02, 9.27352503108912624e-02, 9.27352503108912624e-02, 7.21794249067326144e-01],
        ],
        [
            4.25460207770814725e-02,
            4.25460207770814725e-02,
            4.25460207770814725e-02,
            1.12687925718015780e-01,
            7.34930431163620113e-02,
            7.34930431163620113e-02,
            7.34930431163620113e-02,
            1.12687925718015780e-01,
            1.12687925718015780e-01,
            1.12687925718015780e-01,
            4.25460207770814725e-02,
            4.25460207770814725e-02,
            4.25460207770814725e-02,
            7.34930431163620113e-02,
        ],
    ),
    6: (
        [
            [3.22337890142275540e-01, 3.22337890142275540e-01, 3.22337890142275540e-01, 3.29863295731733785e-02],
            [8.77978124396166515e-01, 4.06739585346111501e-02, 4.06739585346111501e-02, 4.06739585346111501e-02],
            [4.06739585346111501e-02, 8.77978124396166515e-01, 4.06739585346111501e-02, 4.06739585346111501e-02],
            [4.06739585346111501e-02, 4.06739585346111501e-02, 8.77978124396166515e-01, 4.06739585346111501e-02],
            [6.03005664791649298e-01, 2.69672331458315817e-01, 6.36610018750174561e-02, 6.36610018750174561e-02],
            [2.69672331458315817e-01, 6.03005664791649298e-01, 6.36610018750174561e-02, 6.36610018750174561e-02],
            [6.03005664791649298e-01, 6.36610018750174561e-02, 2.69672331458315817e-01, 6.36610018750174561e-02],
            [6.36610018750174561e-02, 6.03005664791649298e-01, 2.69672331458315817e-01, 6.36610018750174561e-02],
            [2.69672331458315817e-01, 6.36610018750174561e-02, 6.03005664791649298e-01, 6.36610018750174561e-02],
            [6.36610018750174561e-02, 2.69672331458315817e-01, 6.03005664791649298e-01, 6.36610018750174561e-02],
            [3.56191386222545203e-01, 2.14602871259151590e-01, 2.14602871259151590e-01, 2.14602871259151590e-01],
            [2.14602871259151590e-01, 3.56191386222545203e-01, 2.14602871259151590e-01, 2.14602871259151590e-01],
            [2.14602871259151590e-01, 2.14602871259151590e-01, 3.56191386222545203e-01, 2.14602871259151590e-01],
            [6.03005664791649298e-01, 6.36610018750174561e-02, 6.36610018750174561e-02, 2.69672331458315817e-01],
            [6.36610018750174561e-02, 6.03005664791649298e-01, 6.36610018750174561e-02, 2.69672331458315817e-01],
            [6.36610018750174561e-02, 6.36610018750174561e-02, 6.03005664791649298e-01, 2.69672331458315817e-01],
            [3.22337890142275540e-01, 3.22337890142275540e-01, 3.29863295731733785e-02, 3.22337890142275540e-01],
            [3.22337890142275540e-01, 3.29863295731733785e-02, 3.22337890142275540e-01, 3.22337890142275540e-01],
            [3.29863295731733785e-02, 3.22337890142275540e-01, 3.22337890142275540e-01, 3.22337890142275540e-01],
            [2.14602871259151590e-01, 2.14602871259151590e-01, 2.14602871259151590e-01, 3.56191386222545203e-01],
            [2.69672331458315817e-01, 6.36610018750174561e-02, 6.36610018750174561e-02, 6.03005664791649298e-01],
            [6.36610018750174561e-02, 2.69672331458315817e-01, 6.36610018750174561e-02, 6.03005664791649298e-01],
            [6.36610018750174561e-02, 6.36610018750174561e-02, 2.69672331458315817e-01, 6.03005664791649298e-01],
            [4.06739585346111501e-02, 4.06739585346111501e-02, 4.06739585346111501e-02, 8.77978124396166515e-01],
        ],
        [
            5.53571815436547168e-02,
            1.00772110553205858e-02,
            1.00772110553205858e-02,
            1.00772110553205858e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            3.99227502581676955e-02,
            3.99227502581676955e-02,
            3.99227502581676955e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            5.53571815436547168e-02,
            5.53571815436547168e-02,
            5.53571815436547168e-02,
            3.99227502581676955e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            4.82142857142856610e-02,
            1.00772110553205858e-02,
        ],
    ),
    8: (
        [
            [5.73365396635926561e-01, 2.05581418258345416e-01, 2.05581418258345416e-01, 1.54717668473826064e-02],
            [2.05581418258345416e-01, 5.73365396635926561e-01, 2.05581418258345416e-01, 1.54717668473826064e-02],
            [2.05581418258345416e-01, 2.05581418258345416e-01, 5.73365396635926561e-01, 1.54717668473826064e-02],
            [7.24705646582849083e-01, 2.30280302967445089e-01, 2.25070252248529418e-02, 2.25070252248529418e-02],
            [2.30280302967445089e-01, 7.24705646582849083e-01, 2.25070252248529418e-02, 2.25070252248529418e-02],
            [7.24705646582849083e-01, 2.25070252248529418e-02, 2.30280302967445089e-01, 2.25070252248529418e-02],
            [2.25070252248529418e-02, 7.24705646582849083e-01, 2.30280302967445089e-01, 2.25070252248529418e-02],
            [2.30280302967445089e-01, 2.25070252248529418e-02, 7.24705646582849083e-01, 2.25070252248529418e-02],
            [2.25070252248529418e-02, 2.30280302967445089e-01, 7.24705646582849083e-01, 2.25070252248529418e-02],
            [9.04223701303022098e-01, 3.19254328989926270e-02, 3.19254328989926270e-02, 3.19254328989926270e-02],
            [3.19254328989926270e-02, 9.04223701303022098e-01, 3.19254328989926270e-02, 3.19254328989926270e-02],
            [3.19254328989926270e-02, 3.19254328989926270e-02, 9.04223701303022098e-01, 3.19254328989926270e-02],
            [3.15008013005478371e-01, 3.15008013005478371e-01, 3.15008013005478371e-01, 5.49759609835649421e-02],
            [4.38541192779898448e-01, 4.38541192779898448e-01, 6.14588072201015523e-02, 6.14588072201015523e-02],
            [4.38541192779898448e-01, 6.14588072201015523e-02, 4.38541192779898448e-01, 6.14588072201015523e-02],
            [6.14588072201015523e-02, 4.38541192779898448e-01, 4.38541192779898448e-01, 6.14588072201015523e-02],
            [7.28024997906927429e-01, 9.06583340310241903e-02, 9.06583340310241903e-02, 9.06583340310241903e-02],
            [9.06583340310241903e-02, 7.28024997906927429e-01, 9.06583340310241903e-02, 9.06583340310241903e-02],
            [9.06583340310241903e-02, 9.06583340310241903e-02, 7.28024997906927429e-01, 9.06583340310241903e-02],
            [4.49045611595568661e-01, 1.83651462801477122e-01, 1.83651462801477122e-01, 1.83651462801477122e-01],
            [1.83651462801477122e-01, 4.49045611595568661e-01, 1.83651462801477122e-01, 1.83651462801477122e-01],
            [1.83651462801477122e-01, 1.83651462801477122e-01, 4.49045611595568661e-01, 1.83651462801477122e-01],
            [5.73365396635926561e-01, 2.05581418258345416e-01, 1.54717668473826064e-02, 2.05581418258345416e-01],
            [2.05581418258345416e-01, 5.73365396635926561e-01, 1.54717668473826064e-02, 2.05581418258345416e-01],
            [5.73365396635926561e-01, 1.54717668473826064e-02, 2.05581418258345416e-01, 2.05581418258345416e-01],
            [1.54717668473826064e-02, 5.73365396635926561e-01, 2.05581418258345416e-01, 2.05581418258345416e-01],
            [2.05581418258345416e-01, 1.54717668473826064e-02, 5.73365396635926561e-01, 2.05581418258345416e-01],
            [1.54717668473826064e-02, 2.05581418258345416e-01, 5.73365396635926561e-01, 2.05581418258345416e-01],
            [7.24705646582849083e-01, 2.25070252248529418e-02, 2.25070252248529418e-02, 2.30280302967445089e-01],
            [2.25070252248529418e-02, 7.24705646582849083e-01, 2.25070252248529418e-02, 2.30280302967445089e-01],
            [2.25070252248529418e-02, 2.25070252248529418e-02, 7.24705646582849083e-01, 2.30280302967445089e-01],
            [3.15008013005478371e-01, 3.15008013005478371e-01, 5.49759609835649421e-02, 3.15008013005478371e-01],
            [3.15008013005478371e-01, 5.49759609835649421e-02, 3.15008013005478371e-01, 3.15008013005478371e-01],
            [5.49759609835649421e-02, 3.15008013005478371e-01, 3.15008013005478371e-01, 3.15008013005478371e-01],
            [4.38541192779898448e-01, 6.14588072201015523e-02, 6.14588072201015523e-02, 4.38541192779898448e-01],
            [6.14588072201015523e-02, 4.38541192779898448e-01, 6.14588072201015523e-02, 4.38541192779898448e-01],
            [6.14588072201015523e-02, 6.14588072201015523e-02, 4.38541192779898448e-01, 4.38541192779898448e-01],
            [1.83651462801477122e-01, 1.83651462801477122e-01, 1.83651462801477122e-01, 4.49045611595568661e-01],
            [2.05581418258345416e-01, 2.05581418258345416e-01, 1.54717668473826064e-02, 5.73365396635926561e-01],
            [2.05581418258345416e-01, 1.54717668473826064e-02, 2.05581418258345416e-01, 5.73365396635926561e-01],
            [1.54717668473826064e-02, 2.05581418258345416e-01, 2.05581418258345416e-01, 5.73365396635926561e-01],
            [2.30280302967445089e-01, 2.25070252248529418e-02, 2.25070252248529418e-02, 7.24705646582849083e-01],
            [2.25070252248529418e-02, 2.30280302967445089e-01, 2.25070252248529418e-02, 7.24705646582849083e-01],
            [2.25070252248529418e-02, 2.25070252248529418e-02, 2.30280302967445089e-01, 7.24705646582849083e-01],
            [9.06583340310241903e-02, 9.06583340310241903e-02, 9.06583340310241903e-02, 7.28024997906927429e-01],
            [3.19254328989926270e-02, 3.19254328989926270e-02, 3.19254328989926270e-02, 9.04223701303022098e-01],
        ],
        [
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            3.95858121242194903e-03,
            3.95858121242194903e-03,
            3.95858121242194903e-03,
            3.69679716038897113e-02,
            3.45491655134326225e-02,
            3.45491655134326225e-02,
            3.45491655134326225e-02,
            2.18481862490120700e-02,
            2.18481862490120700e-02,
            2.18481862490120700e-02,
            5.82153636647130546e-02,
            5.82153636647130546e-02,
            5.82153636647130546e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            3.69679716038897113e-02,
            3.69679716038897113e-02,
            3.69679716038897113e-02,
            3.45491655134326225e-02,
            3.45491655134326225e-02,
            3.45491655134326225e-02,
            5.82153636647130546e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            1.83986598325886382e-02,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            7.33005650068280310e-03,
            2.18481862490120700e-02,
            3.95858121242194903e-03,
        ],
    ),
}
